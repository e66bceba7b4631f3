#pragma once

#include <span>

#include "driftlag/data.hpp"
#include "driftlag/drift.hpp"
#include "driftlag/forecast.hpp"

namespace driftlag::pipeline {

struct PipelineConfig {
    int window_offset_days = 7;
    forecast::InitMethod init = forecast::InitMethod::TrendAligned;
    drift::PhtConfig pht;
};

inline constexpr int kValidationDays = 3;

struct RegionRun {
    forecast::TrainingWindow window;
    forecast::SmoothingParams params;
    forecast::HoltWintersState state;      // after refitting on the training window
    DailySeries monitored;                 // day after the window through the end of the data
    forecast::ForecastSeries forecast;     // one static forecast over `monitored`
    drift::DriftResult drift;
};

/// Training window -> grid search on the next three days -> refit on the
/// window -> static forecast -> Page-Hinkley on the daily SMAPE stream.
/// The validation days are monitored as well.
RegionRun run_region(const DailySeries& daily, std::span<const InterventionEvent> events,
                     const PipelineConfig& cfg = {});

}  // namespace driftlag::pipeline
