#include <gtest/gtest.h>

#include <cmath>

#include "driftlag/error.hpp"
#include "driftlag/synth.hpp"

using namespace driftlag;
using namespace driftlag::synth;

TEST(Synth, NoBreakIsGeometric) {
    SyntheticSpec s;
    s.n_days = 40;
    s.base_level = 7.0;
    s.growth_pre = s.growth_post = 1.1;
    const auto d = generate(s);
    ASSERT_EQ(d.size(), 40u);
    for (std::size_t t = 0; t < d.size(); ++t) EXPECT_NEAR(d.values[t], 7.0 * std::pow(1.1, t), 1e-9 * d.values[t]);
    EXPECT_EQ(d.start_date, Date::from_ymd(2020, 1, 22));
}

TEST(Synth, DayTenValue) {
    SyntheticSpec s;
    s.base_level = 100.0;
    s.growth_pre = s.growth_post = 1.2;
    EXPECT_NEAR(generate(s).values[10], 619.17, 0.01);
}

TEST(Synth, ContinuousAtBreak) {
    SyntheticSpec s;
    const auto mu = expected_curve(s);
    const auto b = static_cast<std::size_t>(s.break_day);
    EXPECT_NEAR(mu[b], s.base_level * std::pow(1.25, s.break_day), 1e-6);
    EXPECT_NEAR(mu[b], mu[b - 1] * 1.25, 1e-6);
    EXPECT_NEAR(mu[b + 1], mu[b] * 1.03, 1e-6);
    EXPECT_NEAR(mu[b + 6], mu[b] * std::pow(1.03, 6), 1e-6);
}

TEST(Synth, WeeklyPattern) {
    SyntheticSpec s;
    s.growth_pre = s.growth_post = 1.0;
    s.base_level = 100.0;
    s.season_amplitude = 0.2;
    const auto mu = expected_curve(s);
    for (std::size_t t = 0; t < 14; ++t) EXPECT_NEAR(mu[t], 100.0 * (1.0 + 0.2 * kWeeklyPattern[t % 7]), 1e-9);
}

TEST(Synth, DeterministicPerSeed) {
    SyntheticSpec s;
    s.noise = Noise::Poisson;
    s.seed = 17;
    EXPECT_EQ(generate(s).values, generate(s).values);
    auto other = s;
    other.seed = 18;
    EXPECT_NE(generate(s).values, generate(other).values);
    for (double v : generate(s).values) EXPECT_EQ(v, std::floor(v));
}

TEST(Synth, PoissonMeanMatchesCurve) {
    SyntheticSpec s;
    s.n_days = 20;
    s.break_day = 10;
    s.base_level = 30.0;
    s.noise = Noise::Poisson;
    const auto mu = expected_curve(s);
    std::vector<double> sum(20, 0.0);
    const int reps = 1000;
    for (int seed = 0; seed < reps; ++seed) {
        s.seed = static_cast<std::uint64_t>(seed);
        const auto d = generate(s);
        for (std::size_t t = 0; t < 20; ++t) sum[t] += d.values[t];
    }
    for (std::size_t t = 0; t < 20; ++t) {
        EXPECT_NEAR(sum[t] / reps, mu[t], 3.0 * std::sqrt(mu[t] / reps)) << "day " << t;
    }
}

TEST(Synth, InvalidSpecs) {
    SyntheticSpec s;
    s.break_day = 60;
    EXPECT_THROW(generate(s), Error);
    s = {};
    s.growth_pre = 1.6;
    EXPECT_THROW(generate(s), Error);
    s = {};
    s.growth_post = 0.8;
    EXPECT_THROW(generate(s), Error);
}

TEST(Synth, ParseSpecAndCsv) {
    const auto s = parse_spec("# demo\nn_days = 45\nbase_level = 1000\nnoise = poisson\nseed = 4\nseason_amplitude=0.2\n");
    EXPECT_EQ(s.n_days, 45);
    EXPECT_DOUBLE_EQ(s.base_level, 1000.0);
    EXPECT_EQ(s.noise, Noise::Poisson);
    EXPECT_EQ(s.seed, 4u);
    EXPECT_DOUBLE_EQ(s.season_amplitude, 0.2);
    EXPECT_THROW(parse_spec("bogus = 1\n"), Error);
    const auto csv = to_csv(generate(s));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "region,date,daily");
}

TEST(Delay, NoBreakNoDrift) {
    SyntheticSpec s;
    s.growth_post = s.growth_pre;
    EXPECT_FALSE(measure_detection_delay(s));
}

TEST(Delay, NoiselessBreakWithinAWeek) {
    SyntheticSpec s;
    const auto d = measure_detection_delay(s);
    ASSERT_TRUE(d);
    EXPECT_GE(*d, 0);
    EXPECT_LE(*d, 7);
}

TEST(Delay, NonDecreasingInThreshold) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticSpec s;
        s.n_days = 45;
        s.base_level = 1000.0;
        s.noise = Noise::Poisson;
        s.seed = seed;
        std::optional<int> prev;
        bool first = true;
        for (double th : {0.05, 0.3, 1.0, 3.0, 10.0}) {
            DelayConfig cfg;
            cfg.pipeline.pht.threshold = th;
            const auto d = measure_detection_delay(s, cfg);
            if (!first && d) {
                ASSERT_TRUE(prev);
                EXPECT_LE(*prev, *d);
            }
            prev = d;
            first = false;
        }
    }
}
