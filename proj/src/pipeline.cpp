#include "driftlag/pipeline.hpp"

#include "driftlag/error.hpp"

namespace driftlag::pipeline {

RegionRun run_region(const DailySeries& daily, std::span<const InterventionEvent> events, const PipelineConfig& cfg) {
    cfg.pht.validate();
    RegionRun run;
    run.window = forecast::training_window(daily, events, cfg.window_offset_days);
    const Date monitor_start = run.window.end_date + 1;
    if (daily.end_date() - run.window.end_date < kValidationDays) {
        throw Error(ErrorCode::InsufficientData, "fewer than three days after the training window for '" +
                                                     daily.region.name + "'");
    }
    const auto train = forecast::floor_counts(run.window.series.values);
    const auto validation = daily.slice(monitor_start, monitor_start + (kValidationDays - 1));
    run.params = forecast::grid_search(train, validation.values, cfg.init);
    run.state = forecast::fit(train, run.params, run.window.series.start_date, cfg.init).final_state;

    run.monitored = daily.slice(monitor_start, daily.end_date());
    run.forecast = forecast::hw_forecast(run.state, static_cast<int>(run.monitored.size()), monitor_start);
    run.drift = drift::detect_drift(run.monitored, run.forecast, cfg.pht);
    return run;
}

}  // namespace driftlag::pipeline
