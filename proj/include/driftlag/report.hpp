#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftlag/chart.hpp"
#include "driftlag/config.hpp"
#include "driftlag/data.hpp"
#include "driftlag/lag.hpp"
#include "driftlag/lasso.hpp"
#include "driftlag/pipeline.hpp"

namespace driftlag::report {

struct DetectInputs {
    SeriesMap cases;
    SeriesMap deaths;
    std::vector<InterventionEvent> events;
    std::map<std::string, RegionMeta> meta;
    /// Fallback populations (JHU US deaths `Population` column).
    std::map<std::string, std::int64_t> populations;

    static DetectInputs load(const config::RunConfig& cfg);
};

struct RegionReport {
    RegionId region;
    DailySeries daily;
    std::vector<InterventionEvent> events;
    std::optional<pipeline::RegionRun> run;
    std::optional<Date> drift_date;
    std::optional<Date> threshold_date;
    std::vector<lag::LagRecord> lags;
    std::optional<std::string> exclusion;
};

/// Configured countries plus US states above the case cutoff, sorted by name.
std::vector<RegionId> select_regions(const DetectInputs& in, const config::RunConfig& cfg);

/// Full per-region pipeline; failures become the report's exclusion reason.
RegionReport detect_region(const RegionId& region, const DetectInputs& in, const config::RunConfig& cfg);

/// Regions run concurrently (OpenMP); output order is by region name.
std::vector<RegionReport> run_detect(const DetectInputs& in, const config::RunConfig& cfg);
/// Serial reference for run_detect.
std::vector<RegionReport> run_detect_reference(const DetectInputs& in, const config::RunConfig& cfg);

/// Filesystem-safe region file stem.
std::string file_stem(const std::string& region);

struct DetectFiles {
    std::string lags_csv;
    std::string lag_summary_csv;
    std::string mask_report_csv;
    std::string regions_csv;
    std::map<std::string, std::string> traces;  // file stem -> csv
    std::map<std::string, std::string> charts;  // file stem -> svg
};

chart::ChartInput chart_input(const RegionReport& report, const config::RunConfig& cfg);
DetectFiles render_detect_outputs(const std::vector<RegionReport>& reports, const config::RunConfig& cfg);
void write_detect_outputs(const DetectFiles& files, const std::string& out_dir);

/// What `regress` needs back from a detect output directory.
struct DetectSummary {
    std::vector<lag::RegionOutcome> outcomes;
    std::vector<InterventionEvent> events;
};

DetectSummary parse_detect_outputs(const std::string& regions_csv, const std::string& lags_csv);
DetectSummary read_detect_outputs(const std::string& dir);

struct RegressResult {
    lag::RegressionDataset dataset;
    lasso::NestedCvReport cv;
    std::map<std::string, std::string> missing_meta;  // dropped before building the dataset
};

RegressResult run_regress(const DetectSummary& detect, const std::map<std::string, RegionMeta>& meta,
                          const config::RunConfig& cfg);
std::string regression_json(const RegressResult& result, const config::RunConfig& cfg);

/// Plain-text overview of a detect output directory.
std::string summary_text(const std::string& detect_dir);

}  // namespace driftlag::report
