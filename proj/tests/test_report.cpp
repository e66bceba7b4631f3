#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "json.hpp"

#include "driftlag/config.hpp"
#include "driftlag/csv.hpp"
#include "driftlag/error.hpp"
#include "driftlag/report.hpp"
#include "driftlag/synth.hpp"

using namespace driftlag;

namespace {

CumulativeSeries cumulate(const DailySeries& d, const std::string& name, RegionKind kind) {
    CumulativeSeries c{{name, kind}, d.start_date, {}};
    std::int64_t total = 0;
    for (double v : d.values) {
        total += static_cast<std::int64_t>(v);
        c.values.push_back(total);
    }
    return c;
}

// Three countries built from synthetic streams: two with a growth break and
// a full set of interventions, one without any intervention.
report::DetectInputs synthetic_inputs() {
    report::DetectInputs in;
    const Date start = Date::from_ymd(2020, 1, 22);
    const std::vector<std::string> names{"Alpha", "Beta", "Gamma"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        synth::SyntheticSpec s;
        s.n_days = 45;
        s.base_level = 1000.0;
        s.season_amplitude = 0.2;
        s.noise = synth::Noise::Poisson;
        s.seed = i;
        const auto daily = synth::generate(s, start);
        in.cases[{names[i], RegionKind::Country}] = cumulate(daily, names[i], RegionKind::Country);
        auto deaths = daily;
        for (auto& v : deaths.values) v = std::floor(v / 100.0);
        in.deaths[{names[i], RegionKind::Country}] = cumulate(deaths, names[i], RegionKind::Country);
        in.deaths[{names[i], RegionKind::Country}].measure = Measure::Deaths;
        if (names[i] == "Gamma") continue;
        int offset = 0;
        for (auto k : kAllInterventionKinds) {
            const int day = k == InterventionKind::MaskWearing ? 40 : 16 + offset++;
            in.events.push_back({names[i], k, start + day});
        }
        RegionMeta m;
        m.region = names[i];
        m.population = 10000000;
        in.meta[names[i]] = m;
    }
    return in;
}

config::RunConfig synthetic_config() {
    config::RunConfig cfg;
    cfg.countries = {"Alpha", "Beta", "Gamma"};
    cfg.include_us_states = false;
    return cfg;
}

}  // namespace

TEST(Config, EchoAndOverrides) {
    config::RunConfig cfg;
    cfg.apply_file("# comment\npht_threshold = 0.5\ninit_method = week_mean\nseed = 9\n");
    EXPECT_DOUBLE_EQ(cfg.pht.threshold, 0.5);
    EXPECT_EQ(cfg.init, forecast::InitMethod::WeekMean);
    EXPECT_EQ(cfg.seed, 9u);
    const auto echo = cfg.echo();
    EXPECT_NE(std::find(echo.begin(), echo.end(), "init_method = week_mean"), echo.end());
    EXPECT_NE(std::find(echo.begin(), echo.end(), "seed = 9"), echo.end());
    EXPECT_THROW(cfg.set("no_such_key", "1"), Error);
    EXPECT_THROW(cfg.set("pht_threshold", "abc"), Error);

    config::RunConfig defaults;
    EXPECT_EQ(defaults.countries.size(), 9u);
    EXPECT_EQ(defaults.us_min_cumulative, 10000);
    EXPECT_EQ(defaults.us_cutoff, Date::from_ymd(2020, 5, 13));
    EXPECT_EQ(defaults.cv.k_outer, 5u);
    EXPECT_EQ(defaults.cv.search.n_draws, 500u);
}

TEST(Detect, SelectsConfiguredCountriesAndStates) {
    auto in = synthetic_inputs();
    in.cases[{"Ohio", RegionKind::UsState}] = CumulativeSeries{{"Ohio", RegionKind::UsState},
                                                               Date::from_ymd(2020, 5, 1), {20000, 20001}};
    in.cases[{"Maine", RegionKind::UsState}] = CumulativeSeries{{"Maine", RegionKind::UsState},
                                                                Date::from_ymd(2020, 5, 1), {20, 21}};
    auto cfg = synthetic_config();
    cfg.include_us_states = true;
    const auto regions = report::select_regions(in, cfg);
    ASSERT_EQ(regions.size(), 4u);
    EXPECT_EQ(regions[3].name, "Ohio");
    cfg.regions = {"Beta"};
    ASSERT_EQ(report::select_regions(in, cfg).size(), 1u);
}

TEST(Detect, FailuresAreIsolatedPerRegion) {
    const auto in = synthetic_inputs();
    const auto reps = report::run_detect(in, synthetic_config());
    ASSERT_EQ(reps.size(), 3u);
    EXPECT_TRUE(reps[0].drift_date) << reps[0].exclusion.value_or("");
    EXPECT_TRUE(reps[1].drift_date) << reps[1].exclusion.value_or("");
    EXPECT_FALSE(reps[2].drift_date);
    EXPECT_EQ(reps[2].exclusion, std::optional<std::string>("NoInterventions"));
    // the break sits at day 30 of the synthetic streams
    const Date brk = Date::from_ymd(2020, 1, 22) + 30;
    for (int i = 0; i < 2; ++i) {
        EXPECT_GE(*reps[static_cast<std::size_t>(i)].drift_date, brk);
        EXPECT_LE(*reps[static_cast<std::size_t>(i)].drift_date, brk + 7);
        EXPECT_EQ(reps[static_cast<std::size_t>(i)].lags.size(), 5u);
        EXPECT_TRUE(reps[static_cast<std::size_t>(i)].threshold_date);
    }
}

TEST(Detect, ParallelMatchesReferenceByteForByte) {
    const auto in = synthetic_inputs();
    const auto cfg = synthetic_config();
    const auto a = report::render_detect_outputs(report::run_detect(in, cfg), cfg);
    const auto b = report::render_detect_outputs(report::run_detect_reference(in, cfg), cfg);
    EXPECT_EQ(a.lags_csv, b.lags_csv);
    EXPECT_EQ(a.regions_csv, b.regions_csv);
    EXPECT_EQ(a.lag_summary_csv, b.lag_summary_csv);
    EXPECT_EQ(a.mask_report_csv, b.mask_report_csv);
    EXPECT_EQ(a.traces, b.traces);
    EXPECT_EQ(a.charts, b.charts);
}

TEST(Detect, OutputsEchoConfigAndRoundTrip) {
    const auto in = synthetic_inputs();
    const auto cfg = synthetic_config();
    const auto reps = report::run_detect(in, cfg);
    const auto files = report::render_detect_outputs(reps, cfg);
    for (const auto* text : {&files.lags_csv, &files.regions_csv, &files.lag_summary_csv, &files.mask_report_csv}) {
        EXPECT_EQ(text->rfind("# countries = ", 0), 0u);
        EXPECT_NE(text->find("# pht_threshold = 0.3"), std::string::npos);
    }
    EXPECT_EQ(files.traces.size(), 2u);
    EXPECT_EQ(files.charts.size(), 2u);

    const auto summary = report::parse_detect_outputs(files.regions_csv, files.lags_csv);
    ASSERT_EQ(summary.outcomes.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(summary.outcomes[i].region, reps[i].region.name);
        EXPECT_EQ(summary.outcomes[i].drift_date, reps[i].drift_date);
        EXPECT_EQ(summary.outcomes[i].threshold_date, reps[i].threshold_date);
    }
    EXPECT_EQ(summary.events.size(), 10u);

    const auto dir = std::filesystem::temp_directory_path() / "driftlag_report_test";
    std::filesystem::remove_all(dir);
    report::write_detect_outputs(files, dir.string());
    EXPECT_EQ(csv::read_file((dir / "regions.csv").string()), files.regions_csv);
    EXPECT_TRUE(std::filesystem::exists(dir / "charts" / "Alpha.svg"));
    EXPECT_TRUE(std::filesystem::exists(dir / "traces" / "Beta.csv"));
    const auto text = report::summary_text(dir.string());
    EXPECT_NE(text.find("2 of 3 regions"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Detect, MaskReport) {
    const auto in = synthetic_inputs();
    const auto cfg = synthetic_config();
    const auto reps = report::run_detect(in, cfg);
    const auto rows = csv::parse(report::render_detect_outputs(reps, cfg).mask_report_csv);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (csv::Row{"region", "drift_date", "mask_date", "days_after_drift"}));
    EXPECT_EQ(std::stoi(rows[1][3]), Date::parse_iso(rows[1][2]) - Date::parse_iso(rows[1][1]));
}

TEST(Chart, DeterministicWithMarkers) {
    const auto in = synthetic_inputs();
    const auto cfg = synthetic_config();
    const auto reps = report::run_detect(in, cfg);
    const auto input = report::chart_input(reps[0], cfg);
    const auto svg = chart::render_svg(input);
    EXPECT_EQ(svg, chart::render_svg(input));
    EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
    EXPECT_NE(svg.find("<!--"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
    EXPECT_NE(svg.find("lockdown"), std::string::npos);
    EXPECT_EQ(svg.find("no forecast available"), std::string::npos);
}

TEST(Chart, EmptyForecastIsAnnotated) {
    chart::ChartInput in;
    in.title = "X";
    in.actuals = DailySeries{{"X"}, Date::from_ymd(2020, 3, 1), {1, 4, 9, 16}, {}};
    const auto svg = chart::render_svg(in);
    EXPECT_NE(svg.find("no forecast available"), std::string::npos);
    EXPECT_EQ(svg.find("polyline"), std::string::npos);
}

TEST(Regress, JsonLayout) {
    report::DetectSummary detect;
    std::map<std::string, RegionMeta> meta;
    for (int i = 0; i < 12; ++i) {
        const std::string name = "R" + std::to_string(i);
        detect.outcomes.push_back({name, Date::from_ymd(2020, 3, 20) + i % 4, Date::from_ymd(2020, 3, 10) + i % 3});
        int k = 0;
        for (auto kind : lag::kReactionKinds) detect.events.push_back({name, kind, Date::from_ymd(2020, 3, 1) + (i * 7 + k++) % 11});
        if (i == 11) continue;
        RegionMeta m;
        m.region = name;
        m.population = 1000000 + 1000 * i;
        m.density_per_km2 = i * i;
        m.urban_share = 0.05 * i;
        m.gini = 0.3;
        meta[name] = m;
    }
    auto cfg = synthetic_config();
    cfg.cv.search.n_draws = 40;
    const auto res = report::run_regress(detect, meta, cfg);
    EXPECT_EQ(res.dataset.regions.size(), 11u);
    EXPECT_TRUE(res.missing_meta.count("R11"));
    const auto text = report::regression_json(res, cfg);
    EXPECT_EQ(text, report::regression_json(report::run_regress(detect, meta, cfg), cfg));
    const auto j = nlohmann::json::parse(text);
    for (const char* key : {"config", "seed", "objective", "target", "design_shape", "feature_names", "regions",
                            "excluded", "outer_folds", "per_fold_lambda", "per_fold", "avg_coefficients",
                            "avg_intercept", "predictions", "metrics"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["design_shape"][0], 11);
    EXPECT_EQ(j["design_shape"][1], 13);
    EXPECT_EQ(j["per_fold_lambda"].size(), 5u);
    EXPECT_EQ(j["seed"], 2020);
    EXPECT_TRUE(j["excluded"].contains("R11"));
}
