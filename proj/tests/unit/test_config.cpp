#include "dsqos/errors.hpp"
#include "dsqos/scenario.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace dsqos;

namespace {

ScenarioConfig quick(ScenarioConfig c, double duration = 20)
{
    c.run.duration_s = duration;
    c.run.warmup_s = 2;
    c.run.replications = 2;
    return c;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(DSQOS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = (std::filesystem::temp_directory_path() / ("dsqos_" + name)).string();
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("serialize then parse gives the same config")
    {
        CHECK(parse_config(serialize_config(ScenarioConfig{})) == ScenarioConfig{});
        for (const auto& p : presets())
            CHECK(parse_config(serialize_config(p.config)) == p.config);
        ScenarioConfig odd;
        odd.be.pkt_size = Uniform{64, 1500};
        odd.af.ratio = FrameSizeRatio{2.5, 1.25, 1};
        odd.scheduler.k_factor = 0.1 + 0.2;
        odd.link.bottleneck_bps = 1234567.891;
        CHECK(parse_config(serialize_config(odd)) == odd);
    }

    TEST_CASE("parsing")
    {
        const auto c = parse_config("# comment\nlink.bottleneck_bps = 1000000\n\naf.sessions=2  # trailing\n");
        CHECK(c.link.bottleneck_bps == 1e6);
        CHECK(c.af.sessions == 2);
        const auto h = parse_config("af.profile = H263\nef.profile = G723\n");
        CHECK(h.af.idr_bps == 840e3);
        CHECK(h.af.rate_bps == 328e3);
        CHECK(h.af.pktsz_bytes == 1038);
        CHECK(h.ef.idr_bps == 14e3);
        CHECK(h.ef.pktsz_bytes == 102);
    }

    TEST_CASE("errors name the offending key")
    {
        auto message = [](const std::string& text) {
            try {
                parse_config(text).validate();
            } catch (const ConfigError& e) {
                return std::string(e.what());
            }
            return std::string{};
        };
        CHECK(message("link.bogus = 3\n").find("link.bogus") != std::string::npos);
        CHECK(message("af.sessions = many\n").find("af.sessions") != std::string::npos);
        CHECK(message("scheduler.k_factor = -1\n").find("scheduler.k_factor") != std::string::npos);
        CHECK(message("be.pkt_size = exp:0\n").find("be.pkt_size") != std::string::npos);
        CHECK(message("no equals sign\n").size() > 0);
    }

    TEST_CASE("derived buffer and capacity")
    {
        ScenarioConfig c;
        CHECK(c.total_slots() == 26);
        CHECK(c.total_offered_bps() == doctest::Approx(2.1e6));
        c.topology.kind = TopologyKind::Multi;
        c.topology.domains = 4;
        CHECK(c.capacity_bps() == doctest::Approx(8.4e6));
        CHECK(c.total_offered_bps() == doctest::Approx(8.4e6));
    }
}

TEST_SUITE("scenario")
{
    TEST_CASE("presets")
    {
        std::vector<std::string> names;
        for (const auto& p : presets()) {
            names.push_back(p.name);
            CHECK_NOTHROW(p.config.validate());
        }
        CHECK(names == std::vector<std::string>{"fig4_4", "fig4_7", "fig4_9", "table5_3"});
        CHECK_THROWS_AS(find_preset("nope"), ConfigError);
        CHECK(find_preset("fig4_7").config.topology.domains == 4);
    }

    TEST_CASE("zero duration gives a header-only CSV")
    {
        ScenarioConfig c;
        c.run.duration_s = 0;
        c.run.warmup_s = 0;
        const auto rows = run_scenario(c);
        CHECK(rows.empty());
        CHECK(to_csv(rows) == csv_header() + "\n");
    }

    TEST_CASE("QoS on at capacity keeps AF and EF loss within 0.1%")
    {
        auto c = quick(find_preset("fig4_4").config, 30);
        c.be.rate_bps = 756e3;
        const auto rows = run_scenario(c);
        REQUIRE(rows.size() == 3);
        for (const auto& r : rows) {
            CHECK(r.normalized_load == doctest::Approx(1.0));
            if (r.cls != TrafficClass::BE) {
                CHECK(*r.loss_pct <= 0.1);
            }
        }
    }

    TEST_CASE("FIFO at 2.6 Mbit/s hurts voice on the order of ten percent")
    {
        auto c = quick(find_preset("fig4_4").config, 30);
        c.scheduler.mode = SchedulerMode::Fifo;
        c.be.rate_bps = 2.6e6 - c.realtime_rate_bps();
        for (const auto& r : run_scenario(c)) {
            CHECK(*r.loss_pct > 0);
            if (r.cls == TrafficClass::EF) {
                CHECK(*r.loss_pct > 3);
                CHECK(*r.loss_pct < 30);
            }
        }
    }

    TEST_CASE("single-rate sweep gives one point")
    {
        const auto rows = sweep_load(quick(ScenarioConfig{}, 5), {500e3});
        CHECK(rows.size() == 3);
        CHECK_THROWS_AS(sweep_load(ScenarioConfig{}, {}), ConfigError);
    }

    TEST_CASE("K sweep needs the static scheduler")
    {
        CHECK_THROWS_AS(sweep_k(ScenarioConfig{}, {0.4, 1.0}), ConfigError);
        auto c = quick(find_preset("fig4_9").config, 5);
        CHECK_THROWS_AS(sweep_k(c, {0.5, -1}), ConfigError);
    }

    TEST_CASE("K sweep output is one block per K")
    {
        auto c = quick(find_preset("fig4_9").config, 5);
        c.sweep.normalized_loads = {0.5, 1.0};
        const auto rows = sweep_k(c, {0.4, 1.2});
        REQUIRE(rows.size() == 2 * 2 * 3);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(rows[i].k_factor == 0.4);
        for (std::size_t i = 6; i < 12; ++i)
            CHECK(rows[i].k_factor == 1.2);
    }

    TEST_CASE("full computed AF share loses nothing up to capacity")
    {
        auto c = quick(find_preset("fig4_9").config, 30);
        c.sweep.normalized_loads = {0.25, 0.5, 0.75, 1.0};
        for (const auto& r : sweep_k(c, {1.0}))
            if (r.cls == TrafficClass::AF)
                CHECK(*r.loss_pct == 0);
    }

    TEST_CASE("normalized load to BE rate")
    {
        const auto c = find_preset("fig4_9").config;
        CHECK(be_rate_for_load(c, 1.0) == doctest::Approx(2.1e6 - 328e3 - 64e3));
        CHECK_THROWS_AS(be_rate_for_load(c, 0.1), ConfigError);
    }

    TEST_CASE("parallel execution gives the same rows as sequential")
    {
        auto c = quick(find_preset("fig4_4").config, 8);
        const std::vector<double> rates{0, 500e3, 1e6, 1.5e6};
        const auto seq = sweep_load(c, rates, {1});
        const auto par = sweep_load(c, rates, {4});
        CHECK(seq == par);
        CHECK(to_csv(seq) == to_csv(par));
    }

    TEST_CASE("infeasible plan surfaces from the driver")
    {
        ScenarioConfig c = quick(ScenarioConfig{}, 5);
        c.af.sessions = 30;
        CHECK_THROWS_AS(run_scenario(c), InfeasiblePlanError);
    }

    TEST_CASE("CLI exit codes")
    {
        CHECK(run_cli("presets list") == 0);
        const auto good = write_temp("good.cfg", "run.duration_s = 2\nrun.warmup_s = 0\nrun.replications = 1\n");
        CHECK(run_cli("run " + good) == 0);
        CHECK(run_cli("sweep-load " + good + " --rates 1000,2000") == 0);
        CHECK(run_cli("sweep-k " + good + " --k 0.5") == 2);
        const auto bad = write_temp("bad.cfg", "link.nonsense = 1\n");
        CHECK(run_cli("run " + bad) == 2);
        const auto infeasible = write_temp("infeasible.cfg", "af.sessions = 30\nrun.duration_s = 2\n");
        CHECK(run_cli("run " + infeasible) == 3);
        CHECK(run_cli("run definitely-not-a-preset") == 2);
    }
}
