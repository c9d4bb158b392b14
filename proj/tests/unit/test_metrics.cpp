#include "dsqos/errors.hpp"
#include "dsqos/metrics.hpp"
#include "dsqos/simulation.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dsqos;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("dsqos_" + name)).string();
}

SweepPoint sample_point()
{
    SweepPoint p;
    p.scenario_id = "s";
    p.seed = 3;
    p.domains = 1;
    p.tb_bps = 2.1e6;
    p.k_factor = 0.4;
    p.total_offered_bps = 2.6e6;
    p.normalized_load = round_sig6(2.6 / 2.1);
    p.cls = TrafficClass::EF;
    p.offered_pkts = 1000;
    p.dropped_pkts = 170;
    p.delivered_pkts = 830;
    p.loss_pct = 17;
    p.mean_delay_ms = round_sig6(110.123456789);
    p.max_delay_ms = 216;
    return p;
}

} // namespace

TEST_SUITE("metrics")
{
    TEST_CASE("loss percentage")
    {
        ClassStats s;
        CHECK_FALSE(loss_percent(s).has_value());
        s.offered_packets = 1000;
        s.delivered_packets = 1000;
        CHECK(*loss_percent(s) == 0);
        s.dropped_packets = 170;
        s.delivered_packets = 830;
        CHECK(*loss_percent(s) == doctest::Approx(17));
        // Packets still in flight are neither lost nor delivered.
        s.delivered_packets = 800;
        s.residual_packets = 30;
        CHECK(*loss_percent(s) == doctest::Approx(17));
    }

    TEST_CASE("mean and max delay")
    {
        MetricsLedger l;
        CHECK_FALSE(mean_delay_ms(l, TrafficClass::EF, 0).has_value());
        Packet p = test::packet_of(100, TrafficClass::EF);
        p.created_at = SimTime{};
        p.delivered_at = SimTime::from_ms(110);
        l.record_offered(p);
        l.record_delivery(p);
        CHECK(*mean_delay_ms(l, TrafficClass::EF, 0) == doctest::Approx(110));

        MetricsLedger two;
        for (int ms : {100, 200}) {
            Packet q = test::packet_of(100, TrafficClass::AF);
            q.delivered_at = SimTime::from_ms(ms);
            two.record_offered(q);
            two.record_delivery(q);
        }
        CHECK(*mean_delay_ms(two, TrafficClass::AF, 0) == doctest::Approx(150));
        CHECK(*max_delay_ms(two.total(TrafficClass::AF)) == doctest::Approx(200));
    }

    TEST_CASE("normalized load")
    {
        CHECK(normalized_load(2.1e6, 2.1e6) == doctest::Approx(1.0));
        CHECK(normalized_load(2.6e6, 2.1e6) == doctest::Approx(1.238).epsilon(0.001));
        CHECK(normalized_load(0, 2.1e6) == 0);
    }

    TEST_CASE("ledger merge adds counts per domain")
    {
        MetricsLedger a(2), b(2);
        Packet p = test::packet_of(500, TrafficClass::BE);
        p.domain = 1;
        a.record_offered(p);
        a.record_drop(p);
        b.record_offered(p);
        a.merge(b);
        CHECK(a.at(TrafficClass::BE, 1).offered_packets == 2);
        CHECK(a.at(TrafficClass::BE, 1).offered_bytes == 1000);
        CHECK(a.at(TrafficClass::BE, 1).dropped_packets == 1);
        CHECK(a.total(TrafficClass::BE).offered_packets == 2);
        CHECK(a.at(TrafficClass::BE, 0).offered_packets == 0);
    }

    TEST_CASE("CSV layout")
    {
        CHECK(to_csv({}) == csv_header() + "\n");
        const std::string one = to_csv({sample_point()});
        CHECK(std::count(one.begin(), one.end(), '\n') == 2);
        SweepPoint empty = sample_point();
        empty.loss_pct.reset();
        empty.mean_delay_ms.reset();
        empty.max_delay_ms.reset();
        const auto text = to_csv({empty});
        CHECK(text.substr(text.size() - 4) == ",,,\n");
    }

    TEST_CASE("CSV re-import reproduces the points")
    {
        std::vector<SweepPoint> pts{sample_point(), sample_point()};
        pts[1].cls = TrafficClass::BE;
        pts[1].loss_pct.reset();
        const auto path = temp_path("roundtrip.csv");
        export_csv(pts, path);
        CHECK(import_csv(path) == pts);
        CHECK(parse_csv(to_csv(pts)) == pts);
        CHECK_THROWS(parse_csv("not,a,header\n"));
        CHECK_THROWS(parse_csv(csv_header() + "\nfoo,1\n"));
    }

    TEST_CASE("export to an unwritable path names the path")
    {
        const std::string bad = "/nonexistent-dir/x/out.csv";
        try {
            export_csv({}, bad);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(bad) != std::string::npos);
        }
    }

    TEST_CASE("run conserves packets and is reproducible")
    {
        auto cfg = test::short_config(20, 2);
        cfg.be.rate_bps = 1.5e6;
        const auto r = simulate(cfg, 12);
        CHECK(r.conservation_checks >= 19);
        CHECK(r.conservation_violations == 0);
        for (auto c : kAllClasses) {
            const auto s = r.ledger.total(c);
            CHECK(s.offered_packets == s.delivered_packets + s.dropped_packets + s.residual_packets);
            if (s.delivered_packets > 0) {
                CHECK(s.delay_max_us * static_cast<double>(s.delivered_packets) >= static_cast<double>(s.delay_sum_us));
                CHECK(*loss_percent(s) >= 0);
                CHECK(*loss_percent(s) <= 100);
            }
        }
        const auto again = simulate(cfg, 12);
        for (auto c : kAllClasses)
            CHECK(again.ledger.total(c) == r.ledger.total(c));
    }

    TEST_CASE("same run exported twice gives byte-identical files")
    {
        auto cfg = test::short_config(10, 1);
        auto rows = [&] {
            const auto r = simulate(cfg, 5);
            std::vector<SweepPoint> pts;
            for (auto c : kDataClasses) {
                SweepPoint p;
                p.scenario_id = cfg.id;
                p.cls = c;
                p.offered_pkts = r.ledger.total(c).offered_packets;
                p.loss_pct = loss_percent(r.ledger.total(c));
                p.mean_delay_ms = mean_delay_ms(r.ledger.total(c));
                pts.push_back(p);
            }
            return pts;
        };
        const auto a = temp_path("a.csv"), b = temp_path("b.csv");
        export_csv(rows(), a);
        export_csv(rows(), b);
        CHECK(slurp(a) == slurp(b));
        CHECK_FALSE(slurp(a).empty());
    }

    TEST_CASE("warm-up packets are not counted")
    {
        auto cfg = test::short_config(10, 0);
        const auto all = simulate(cfg, 1);
        cfg.run.warmup_s = 5;
        const auto late = simulate(cfg, 1);
        for (auto c : kDataClasses) {
            CHECK(late.ledger.total(c).offered_packets < all.ledger.total(c).offered_packets);
            CHECK(late.ledger.total(c).offered_packets > 0);
        }
    }
}
