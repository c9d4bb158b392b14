#include "dsqos/errors.hpp"
#include "dsqos/scheduler.hpp"
#include "dsqos/simulation.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace dsqos;

namespace {

QueueSet empty_queues(std::uint32_t cap = 1'000'000)
{
    return QueueSet{ClassQueue{TrafficClass::AF, cap}, ClassQueue{TrafficClass::EF, cap},
                    ClassQueue{TrafficClass::BE, cap}, ClassQueue{TrafficClass::NC, cap}};
}

WeightVector weights(double af, double ef, double be, double nc = 0)
{
    WeightVector w;
    w[TrafficClass::AF] = af;
    w[TrafficClass::EF] = ef;
    w[TrafficClass::BE] = be;
    w[TrafficClass::NC] = nc;
    return w;
}

/// Serves `n` packets with every data queue kept backlogged; returns bytes served per class.
PerClass<double> saturated_service(const WeightVector& w, int n, std::uint64_t seed, bool variable_sizes)
{
    auto q = empty_queues();
    DeficitState d;
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::uint32_t> size(102, 1402);
    auto refill = [&](TrafficClass c) {
        while (q[index(c)].size() < 4)
            q[index(c)].enqueue(test::packet_of(variable_sizes ? size(gen) : 1000, c), SimTime{});
    };
    PerClass<double> served{};
    for (int i = 0; i < n; ++i) {
        for (auto c : kDataClasses)
            refill(c);
        const auto c = select_next(q, w, d, 1500);
        REQUIRE(c.has_value());
        served[index(*c)] += q[index(*c)].dequeue().size;
    }
    return served;
}

} // namespace

TEST_SUITE("scheduler")
{
    TEST_CASE("adaptive weights")
    {
        const auto p = default_priorities();
        const auto eq = adaptive_weights(PerClass<std::size_t>{7, 7, 7, 0}, p);
        CHECK(eq[TrafficClass::AF] == doctest::Approx(100.0 / 3));
        CHECK(eq[TrafficClass::EF] == doctest::Approx(50));
        CHECK(eq[TrafficClass::BE] == doctest::Approx(100.0 / 6));

        const auto w = adaptive_weights(PerClass<std::size_t>{10, 0, 5, 0}, p);
        CHECK(w[TrafficClass::AF] == doctest::Approx(80));
        CHECK(w[TrafficClass::EF] == doctest::Approx(0));
        CHECK(w[TrafficClass::BE] == doctest::Approx(20));

        const auto fb = adaptive_weights(PerClass<std::size_t>{}, p);
        CHECK(fb[TrafficClass::AF] == doctest::Approx(100.0 / 3));
        CHECK(fb[TrafficClass::EF] == doctest::Approx(50));
        CHECK(fb[TrafficClass::BE] == doctest::Approx(100.0 / 6));
        CHECK(fb.sum() == doctest::Approx(100));
    }

    TEST_CASE("allocated-length weights are fixed by the plan")
    {
        const BufferPlan plan{26, 14, 3, 8, 1};
        const auto w = allocated_length_weights(plan, default_priorities());
        CHECK(w.sum() == doctest::Approx(100));
        CHECK(w[TrafficClass::AF] / w[TrafficClass::BE] == doctest::Approx(28.0 / 8));
        CHECK(w[TrafficClass::EF] / w[TrafficClass::BE] == doctest::Approx(9.0 / 8));
    }

    TEST_CASE("static weights from input rates")
    {
        const auto af = ClassTrafficSpec::make(TrafficClass::AF, 840e3, 1038, 0.1, 1);
        const auto ef = ClassTrafficSpec::make(TrafficClass::EF, 64e3, 1402, 0.15, 1);
        const auto w1 = static_weights(af, ef, 1e6, 2.1e6, 1.0);
        CHECK(w1[TrafficClass::AF] == doctest::Approx(80));
        CHECK(w1[TrafficClass::EF] == doctest::Approx(64.0 / 2100 * 100 * 3));
        CHECK(w1[TrafficClass::EF] == doctest::Approx(9.14).epsilon(0.001));
        CHECK(w1[TrafficClass::BE] == doctest::Approx(100 - 80 - 64.0 / 2100 * 300));

        const auto w5 = static_weights(af, ef, 1e6, 2.1e6, 0.5);
        CHECK(w5[TrafficClass::AF] == doctest::Approx(40));
        CHECK(w5[TrafficClass::BE] == doctest::Approx(50.857).epsilon(0.0001));

        CHECK_THROWS_AS(static_weights(af, ef, 1e6, 2.1e6, 0), ConfigError);
    }

    TEST_CASE("static weights rescale when AF and EF over-subscribe")
    {
        const auto af = ClassTrafficSpec::make(TrafficClass::AF, 384e3, 1038, 0.1, 3);
        const auto ef = ClassTrafficSpec::make(TrafficClass::EF, 64e3, 1402, 0.15, 3);
        const auto w = static_weights(af, ef, 756e3, 2.1e6, 1.0);
        const double raw_af = 384.0 / 2100 * 100 * 3 * 2; // 109.7
        const double raw_ef = 64.0 / 2100 * 100 * 3 * 3;  // 27.4
        CHECK(w[TrafficClass::AF] + w[TrafficClass::EF] == doctest::Approx(95));
        CHECK(w[TrafficClass::AF] / w[TrafficClass::EF] == doctest::Approx(raw_af / raw_ef));
        CHECK(w[TrafficClass::BE] == doctest::Approx(5));
    }

    TEST_CASE("scheduler config validation")
    {
        SchedulerConfig c;
        CHECK_NOTHROW(c.validate());
        c.k_factor = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = {};
        c.recompute_epoch = SimTime{};
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }

    TEST_CASE("single backlogged queue is always served")
    {
        auto q = empty_queues();
        DeficitState d;
        for (int i = 0; i < 20; ++i)
            q[index(TrafficClass::BE)].enqueue(test::packet_of(1400), SimTime{});
        const auto w = weights(80, 9.14, 10.86);
        for (int i = 0; i < 20; ++i) {
            const auto c = select_next(q, w, d, 1500);
            REQUIRE(c.has_value());
            CHECK(*c == TrafficClass::BE);
            q[index(*c)].dequeue();
        }
        CHECK_FALSE(select_next(q, w, d, 1500).has_value());
    }

    TEST_CASE("zero-weight queue is served when nothing else is waiting")
    {
        auto q = empty_queues();
        DeficitState d;
        q[index(TrafficClass::EF)].enqueue(test::packet_of(200), SimTime{});
        const auto c = select_next(q, weights(100, 0, 0), d, 1500);
        REQUIRE(c.has_value());
        CHECK(*c == TrafficClass::EF);
    }

    TEST_CASE("saturated service shares match the weights")
    {
        const auto w = weights(80, 9.14, 10.86);
        for (bool variable : {false, true}) {
            const auto served = saturated_service(w, 20000, 17, variable);
            const double total = served[0] + served[1] + served[2] + served[3];
            for (auto c : kDataClasses)
                CHECK(std::abs(100 * served[index(c)] / total - w[c]) < 2.0);
        }
    }

    TEST_CASE("scaling all weights leaves every decision unchanged")
    {
        std::mt19937_64 gen(99);
        std::uniform_real_distribution<double> wdist(0.1, 50);
        std::uniform_int_distribution<std::uint32_t> size(64, 1500);
        std::uniform_int_distribution<int> cls(0, 3);
        for (int trial = 0; trial < 20; ++trial) {
            const auto w = weights(wdist(gen), wdist(gen), wdist(gen), wdist(gen));
            const double factor = trial % 2 ? 3.7 : 1e-3;
            WeightVector scaled = w;
            for (auto& x : scaled.w)
                x *= factor;
            auto qa = empty_queues(), qb = empty_queues();
            DeficitState da, db;
            for (int i = 0; i < 400; ++i) {
                if (i % 3 != 2) {
                    const auto c = static_cast<TrafficClass>(cls(gen));
                    const auto s = size(gen);
                    qa[index(c)].enqueue(test::packet_of(s, c), SimTime{});
                    qb[index(c)].enqueue(test::packet_of(s, c), SimTime{});
                }
                const auto a = select_next(qa, w, da, 1500);
                const auto b = select_next(qb, scaled, db, 1500);
                REQUIRE(a == b);
                if (a) {
                    qa[index(*a)].dequeue();
                    qb[index(*b)].dequeue();
                }
            }
        }
    }

    TEST_CASE("ties go to EF, then AF, then BE")
    {
        auto q = empty_queues();
        DeficitState d;
        for (auto c : kDataClasses)
            q[index(c)].enqueue(test::packet_of(500, c), SimTime{});
        std::vector<TrafficClass> order;
        for (int i = 0; i < 3; ++i) {
            const auto c = select_next(q, weights(1, 1, 1), d, 1500);
            REQUIRE(c.has_value());
            order.push_back(*c);
            q[index(*c)].dequeue();
        }
        CHECK(order == std::vector<TrafficClass>{TrafficClass::EF, TrafficClass::AF, TrafficClass::BE});
    }

    TEST_CASE("deficit credit stays bounded")
    {
        auto q = empty_queues();
        DeficitState d;
        std::mt19937_64 gen(5);
        std::uniform_int_distribution<std::uint32_t> size(64, 1500);
        const auto w = weights(60, 25, 15);
        for (int i = 0; i < 5000; ++i) {
            for (auto c : kDataClasses)
                if (q[index(c)].size() < 3)
                    q[index(c)].enqueue(test::packet_of(size(gen), c), SimTime{});
            const auto c = select_next(q, w, d, 1500);
            REQUIRE(c.has_value());
            q[index(*c)].dequeue();
            for (auto k : kAllClasses) {
                CHECK(d.credit[index(k)] >= -1e-6);
                CHECK(d.credit[index(k)] <= 1500 * w[k] / w.sum() + 1500 + 1e-6);
            }
        }
    }

    TEST_CASE("FIFO serves in arrival order and drops regardless of class")
    {
        FifoQueue f(3);
        f.enqueue(test::packet_of(100, TrafficClass::BE, 1), SimTime{});
        f.enqueue(test::packet_of(100, TrafficClass::EF, 2), SimTime{});
        f.enqueue(test::packet_of(100, TrafficClass::AF, 3), SimTime{});
        CHECK(f.enqueue(test::packet_of(100, TrafficClass::EF, 4), SimTime{}) == EnqueueResult::Dropped);
        for (std::uint64_t id = 1; id <= 3; ++id)
            CHECK(f.fifo_select()->id == id);
        CHECK_FALSE(f.fifo_select().has_value());
    }

    TEST_CASE("FIFO at 120% load loses packets of every class")
    {
        auto cfg = test::short_config(30, 2);
        cfg.scheduler.mode = SchedulerMode::Fifo;
        cfg.be.rate_bps = 1.2 * 2.1e6 - cfg.realtime_rate_bps();
        const auto r = simulate(cfg, 3);
        for (auto c : kDataClasses)
            CHECK(r.ledger.total(c).dropped_packets > 0);
    }

    TEST_CASE("link never idles while a queue holds a packet")
    {
        for (auto mode : {SchedulerMode::Adaptive, SchedulerMode::Static, SchedulerMode::Fifo}) {
            auto cfg = test::short_config(20, 1);
            cfg.scheduler.mode = mode;
            cfg.be.rate_bps = 1.5e6;
            cfg.run.sample_interval = SimTime::from_ms(7);
            const auto r = simulate(cfg, 8);
            CHECK(r.conservation_checks > 1000);
            CHECK(r.work_conservation_violations == 0);
        }
    }

    TEST_CASE("AF loss does not grow with K")
    {
        // Default bursty video so that AF actually loses packets at low K.
        auto cfg = test::short_config(30, 2);
        cfg.af.idr_bps = 840e3;
        cfg.af.rate_bps = 328e3;
        cfg.af.sessions = 1;
        cfg.ef.sessions = 1;
        cfg.scheduler.mode = SchedulerMode::Static;
        for (double be : {1.0e6, 1.708e6}) {
            cfg.be.rate_bps = be;
            double previous = 101;
            for (double k : {0.4, 0.6, 0.8, 1.0, 1.2}) {
                cfg.scheduler.k_factor = k;
                MetricsLedger pooled;
                for (int r = 0; r < 3; ++r)
                    pooled.merge(simulate(cfg, mix64(1 + r)).ledger);
                const double loss = *loss_percent(pooled.total(TrafficClass::AF));
                CHECK(loss <= previous);
                previous = loss;
            }
        }
    }
}
