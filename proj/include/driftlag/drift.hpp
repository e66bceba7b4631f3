#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftlag/date.hpp"
#include "driftlag/forecast.hpp"
#include "driftlag/smape.hpp"

namespace driftlag::drift {

struct PhtConfig {
    double threshold = 0.3;
    std::size_t min_instances = 3;
    double delta = 0.005;
    double forgetting = 0.9999;

    void validate() const;
};

/// One-sided Page-Hinkley state for detecting increases of the monitored value.
struct PhtState {
    std::size_t n = 0;
    double weight = 0.0;  // forgetting-weighted observation count behind `mean`
    double mean = 0.0;
    double cum = 0.0;
    double cum_min = 0.0;

    /// Current test statistic m_T - min m_T (never negative).
    double statistic() const { return cum - cum_min; }
};

struct PhtStep {
    PhtState state;
    bool alarm = false;
};

PhtStep pht_step(const PhtState& state, double x, const PhtConfig& cfg);

struct DriftResult {
    std::optional<Date> drift_date;
    /// 1-based number of monitored observations consumed when the alarm fired.
    std::optional<std::size_t> alarm_index;
    Date start_date;
    std::vector<double> ph_trace;
    std::vector<double> smape_trace;
};

/// Feeds per-day SMAPE of `forecasts` against `actuals` through the test. Only
/// the first alarm is reported; traces cover every monitored day.
DriftResult detect_drift(const DailySeries& actuals, const forecast::ForecastSeries& forecasts,
                         const PhtConfig& cfg = {});
/// Same test on an already computed error stream.
DriftResult detect_on_stream(std::span<const double> errors, Date start_date, const PhtConfig& cfg = {});

/// `date,smape,ph_stat,alarm`
std::string trace_csv(const DriftResult& result);

/// Adaptive windowing detector (exact variant: every split point of the
/// window is tested). Cross-check only.
class Adwin {
  public:
    explicit Adwin(double confidence_delta = 0.002);

    /// Returns true when a cut was found; the older part of the window is dropped.
    bool update(double x);

    std::size_t width() const { return window_.size(); }
    double mean() const;
    const std::deque<double>& window() const { return window_; }

  private:
    bool cut_found(std::size_t& cut) const;

    double delta_;
    std::deque<double> window_;
};

}  // namespace driftlag::drift
