// driftlag command line: detect, regress, synth, report.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftlag/config.hpp"
#include "driftlag/csv.hpp"
#include "driftlag/error.hpp"
#include "driftlag/report.hpp"
#include "driftlag/synth.hpp"

namespace fs = std::filesystem;
using namespace driftlag;

namespace {

// Flags are stored as raw strings and applied through RunConfig::set after the
// config file, so flags always win.
struct Overrides {
    std::vector<std::pair<std::string, std::string>> items;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
             bool repeatable = false) {
        auto* opt = app->add_option(flag, help)->type_name("TEXT");
        if (repeatable) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1)->type_size(1);
        opt->each([this, key](const std::string& v) { items.emplace_back(key, v); });
    }
};

config::RunConfig load_config(const std::string& config_path, const Overrides& ov) {
    config::RunConfig cfg;
    if (!config_path.empty()) cfg.apply_file(csv::read_file(config_path));
    std::vector<std::string> cases, deaths;
    for (const auto& [k, v] : ov.items) {
        if (k == "cases") cases.push_back(v);
        else if (k == "deaths") deaths.push_back(v);
        else cfg.set(k, v);
    }
    if (!cases.empty()) cfg.cases_paths = cases;
    if (!deaths.empty()) cfg.deaths_paths = deaths;
    return cfg;
}

void add_run_flags(CLI::App* app, Overrides& ov) {
    ov.add(app, "--pht-threshold", "pht_threshold", "Page-Hinkley alarm threshold");
    ov.add(app, "--pht-min-instances", "pht_min_instances", "observations before an alarm is allowed");
    ov.add(app, "--pht-delta", "pht_delta", "Page-Hinkley magnitude tolerance");
    ov.add(app, "--pht-forgetting", "pht_forgetting", "running-mean forgetting factor");
    ov.add(app, "--window-offset", "window_offset_days", "training window end, days after the first NPI");
    ov.add(app, "--init-method", "init_method", "trend_aligned or week_mean");
    ov.add(app, "--regions", "regions", "comma separated region filter");
    ov.add(app, "--countries", "countries", "comma separated country list");
    ov.add(app, "--us-min-cumulative", "us_min_cumulative", "US state inclusion cutoff");
    ov.add(app, "--us-cutoff", "us_cutoff", "date for the US state cutoff (YYYY-MM-DD)");
    ov.add(app, "--death-per-capita", "death_per_capita", "death threshold per inhabitant");
    ov.add(app, "--aliases", "aliases", "raw,canonical region alias file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drift detection on daily case counts and intervention lag analysis"};
    app.require_subcommand(1);

    std::string config_path;

    auto* detect = app.add_subcommand("detect", "detect drift per region and measure intervention lags");
    Overrides detect_ov;
    detect->add_option("--config", config_path, "key = value configuration file");
    detect_ov.add(detect, "--cases", "cases", "JHU CSSE confirmed-cases csv (global or US; repeatable)", true);
    detect_ov.add(detect, "--deaths", "deaths", "JHU CSSE deaths csv (global or US; repeatable)", true);
    detect_ov.add(detect, "--npis", "npis", "interventions csv: region,kind,date");
    detect_ov.add(detect, "--meta", "meta", "region metadata csv (populations for the death threshold)");
    detect_ov.add(detect, "--out", "out", "output directory");
    add_run_flags(detect, detect_ov);

    auto* regress = app.add_subcommand("regress", "nested cross-validated Lasso on reaction times");
    Overrides regress_ov;
    regress->add_option("--config", config_path, "key = value configuration file");
    regress_ov.add(regress, "--detect-out", "detect_out", "output directory of a detect run");
    regress_ov.add(regress, "--meta", "meta", "region metadata csv");
    regress_ov.add(regress, "--seed", "seed", "top-level random seed");
    regress_ov.add(regress, "--out", "out", "output directory");
    regress_ov.add(regress, "--lambda-draws", "lambda_draws", "random-search draws per outer fold");
    regress_ov.add(regress, "--cv-metric", "cv_metric", "inner selection metric: mse or mae");
    regress_ov.add(regress, "--standardize-within-fold", "standardize_within_fold", "true or false");

    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic daily series");
    std::string spec_path, synth_out;
    synth_cmd->add_option("--spec", spec_path, "synthetic spec (key = value)")->required();
    synth_cmd->add_option("--out", synth_out, "output csv")->required();

    auto* report_cmd = app.add_subcommand("report", "print a summary of a detect output directory");
    std::string report_dir;
    report_cmd->add_option("--detect-out", report_dir, "output directory of a detect run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) {
            const auto cfg = load_config(config_path, detect_ov);
            const auto inputs = report::DetectInputs::load(cfg);
            const auto reports = report::run_detect(inputs, cfg);
            report::write_detect_outputs(report::render_detect_outputs(reports, cfg), cfg.out_dir);
            std::size_t detected = 0;
            for (const auto& r : reports) {
                if (r.drift_date) ++detected;
                else std::cerr << "excluded " << r.region.name << ": " << r.exclusion.value_or("?") << "\n";
            }
            std::cout << reports.size() << " regions, " << detected << " drifts detected; outputs in " << cfg.out_dir
                      << "\n";
        } else if (regress->parsed()) {
            const auto cfg = load_config(config_path, regress_ov);
            if (cfg.detect_out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--detect-out is required");
            if (cfg.meta_path.empty()) throw Error(ErrorCode::InvalidArgument, "--meta is required");
            const auto detect_summary = report::read_detect_outputs(cfg.detect_out_dir);
            const auto meta = load_region_meta(csv::read_file(cfg.meta_path));
            const auto result = report::run_regress(detect_summary, meta, cfg);
            fs::create_directories(cfg.out_dir);
            csv::write_file((fs::path(cfg.out_dir) / "regression.json").string(), report::regression_json(result, cfg));
            for (const auto& [region, why] : result.missing_meta) std::cerr << "dropped " << region << ": " << why << "\n";
            std::printf("design %zu x %zu  MAE %.3f  RMSE %.3f  R2 %s\n", result.dataset.features.size(),
                        result.dataset.feature_names.size(), result.cv.metrics.mae, result.cv.metrics.rmse,
                        result.cv.metrics.r2 ? std::to_string(*result.cv.metrics.r2).c_str() : "n/a");
        } else if (synth_cmd->parsed()) {
            const auto spec = synth::parse_spec(csv::read_file(spec_path));
            csv::write_file(synth_out, synth::to_csv(synth::generate(spec)));
        } else if (report_cmd->parsed()) {
            std::cout << report::summary_text(report_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "driftlag: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
