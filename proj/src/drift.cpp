#include "driftlag/drift.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "driftlag/error.hpp"

namespace driftlag::drift {

double smape(double actual, double forecast) {
    if (!std::isfinite(actual) || !std::isfinite(forecast)) throw Error(ErrorCode::NonFinite, "smape input");
    if (actual < 0.0 || forecast < 0.0) throw Error(ErrorCode::OutOfRange, "smape inputs must be non-negative");
    const double denom = actual + forecast;
    if (denom == 0.0) return 0.0;
    return 2.0 * std::fabs(forecast - actual) / denom;
}

void PhtConfig::validate() const {
    if (!(threshold > 0.0)) throw Error(ErrorCode::OutOfRange, "PHT threshold must be positive");
    if (min_instances < 1) throw Error(ErrorCode::OutOfRange, "PHT min_instances must be positive");
    if (!(delta >= 0.0)) throw Error(ErrorCode::OutOfRange, "PHT delta must be non-negative");
    if (!(forgetting > 0.0 && forgetting <= 1.0)) throw Error(ErrorCode::OutOfRange, "PHT forgetting must lie in (0,1]");
}

PhtStep pht_step(const PhtState& state, double x, const PhtConfig& cfg) {
    PhtStep out{state, false};
    PhtState& s = out.state;
    s.n += 1;
    s.weight = cfg.forgetting * s.weight + 1.0;
    s.mean += (x - s.mean) / s.weight;
    s.cum += x - s.mean - cfg.delta;
    if (s.n == 1 || s.cum < s.cum_min) s.cum_min = s.cum;
    out.alarm = s.n >= cfg.min_instances && s.statistic() > cfg.threshold;
    return out;
}

DriftResult detect_on_stream(std::span<const double> errors, Date start_date, const PhtConfig& cfg) {
    cfg.validate();
    DriftResult out;
    out.start_date = start_date;
    out.smape_trace.assign(errors.begin(), errors.end());
    out.ph_trace.reserve(errors.size());
    PhtState state;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!std::isfinite(errors[i])) throw Error(ErrorCode::NonFinite, "error stream value");
        const auto step = pht_step(state, errors[i], cfg);
        state = step.state;
        out.ph_trace.push_back(state.statistic());
        if (step.alarm && !out.alarm_index) {
            out.alarm_index = i + 1;
            out.drift_date = start_date + static_cast<int>(i);
        }
    }
    return out;
}

DriftResult detect_drift(const DailySeries& actuals, const forecast::ForecastSeries& forecasts, const PhtConfig& cfg) {
    if (actuals.values.empty() || actuals.size() != forecasts.values.size() ||
        actuals.start_date != forecasts.start_date) {
        throw Error(ErrorCode::Misaligned, "actuals and forecasts must cover the same days");
    }
    std::vector<double> errors(actuals.size());
    for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = smape(actuals.values[i], forecasts.values[i]);
    return detect_on_stream(errors, actuals.start_date, cfg);
}

std::string trace_csv(const DriftResult& result) {
    std::string out = "date,smape,ph_stat,alarm\n";
    char buf[96];
    for (std::size_t i = 0; i < result.smape_trace.size(); ++i) {
        const bool alarm = result.alarm_index && *result.alarm_index == i + 1;
        std::snprintf(buf, sizeof buf, "%s,%.10f,%.10f,%d\n", (result.start_date + static_cast<int>(i)).iso().c_str(),
                      result.smape_trace[i], result.ph_trace[i], alarm ? 1 : 0);
        out += buf;
    }
    return out;
}

Adwin::Adwin(double confidence_delta) : delta_(confidence_delta) {
    if (!(confidence_delta > 0.0 && confidence_delta < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "ADWIN confidence must lie in (0,1)");
    }
}

double Adwin::mean() const {
    if (window_.empty()) return 0.0;
    return std::accumulate(window_.begin(), window_.end(), 0.0) / static_cast<double>(window_.size());
}

bool Adwin::cut_found(std::size_t& cut) const {
    const std::size_t n = window_.size();
    if (n < 2) return false;
    const double total = std::accumulate(window_.begin(), window_.end(), 0.0);
    const double delta_prime = delta_ / static_cast<double>(n);
    double head = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        head += window_[k - 1];
        const double n0 = static_cast<double>(k);
        const double n1 = static_cast<double>(n - k);
        const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
        const double eps = std::sqrt(std::log(4.0 / delta_prime) / (2.0 * m));
        if (std::fabs(head / n0 - (total - head) / n1) > eps) {
            cut = k;
            return true;
        }
    }
    return false;
}

bool Adwin::update(double x) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "ADWIN input");
    window_.push_back(x);
    bool changed = false;
    std::size_t cut = 0;
    while (cut_found(cut)) {
        window_.erase(window_.begin(), window_.begin() + static_cast<std::ptrdiff_t>(cut));
        changed = true;
    }
    return changed;
}

}  // namespace driftlag::drift
