#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlag/data.hpp"
#include "driftlag/date.hpp"

namespace driftlag::forecast {

inline constexpr int kSeasonLength = 7;
/// Lower bound applied to level, trend and forecasts.
inline constexpr double kFloor = 1e-6;

/// Level, trend and season smoothing weights, each strictly inside (0,1).
struct SmoothingParams {
    double alpha = 0.5;
    double beta = 0.5;
    double gamma = 0.5;

    void validate() const;
    auto operator<=>(const SmoothingParams&) const = default;
};

/// Multiplicative-trend, additive-season state. `season_index` selects the
/// seasonal term that applies to the next observation.
struct HoltWintersState {
    double level = 1.0;
    double trend = 1.0;
    std::array<double, kSeasonLength> seasonal{};
    int season_index = 0;

    double one_step() const { return level * trend + seasonal[static_cast<std::size_t>(season_index)]; }
};

struct ForecastSeries {
    Date start_date;
    std::vector<double> values;
};

struct TrainingWindow {
    DailySeries series;  // first day of the source series through end_date
    Date first_npi;
    Date end_date;
};

/// Fit inputs are floored at 1 so the multiplicative trend never sees zeros.
std::vector<double> floor_counts(std::span<const double> values);

/// Window covering every day up to first NPI + `offset_days` (inclusive).
TrainingWindow training_window(const DailySeries& series, std::span<const InterventionEvent> events,
                               int offset_days = 7);

/// Two-week heuristics. Both take the growth from the ratio of weekly means.
/// WeekMean uses the first week's mean as the level and the residuals around
/// it as seasonal terms. TrendAligned moves the level back to the step before
/// day 0 and takes the seasonal terms around the growth curve, so an
/// exactly geometric series starts with zero one-step error.
enum class InitMethod { TrendAligned, WeekMean };

InitMethod parse_init_method(std::string_view text);
std::string to_string(InitMethod m);

HoltWintersState init_state(std::span<const double> train, InitMethod method = InitMethod::TrendAligned);

HoltWintersState hw_update(const HoltWintersState& state, double y, const SmoothingParams& p);

/// h-step-ahead forecasts for h = 1..horizon starting at `start_date`.
ForecastSeries hw_forecast(const HoltWintersState& state, int horizon, Date start_date = Date());

struct FitResult {
    ForecastSeries one_step;  // in-sample one-step-ahead forecasts, aligned with the input
    HoltWintersState final_state;
};

/// Runs the recursions over `train` from `initial`.
FitResult fit_from(const HoltWintersState& initial, std::span<const double> train, const SmoothingParams& p,
                   Date start_date = Date());
/// init_state followed by fit_from; `train` is used as given (callers floor it).
FitResult fit(std::span<const double> train, const SmoothingParams& p, Date start_date = Date(),
              InitMethod init = InitMethod::TrendAligned);

/// The nine grid values 0.1, 0.2, ..., 0.9.
std::array<double, 9> grid_values();
inline constexpr std::size_t kGridSize = 9 * 9 * 9;
SmoothingParams grid_candidate(std::size_t index);

/// Mean SMAPE of the `validation.size()`-step forecast after fitting on `train`.
double validation_score(std::span<const double> train, std::span<const double> validation, const SmoothingParams& p,
                        InitMethod init = InitMethod::TrendAligned);

/// Exhaustive search over the 9^3 grid, scored on three validation days
/// that immediately follow `train`. Ties go to the lexicographically smallest
/// (alpha, beta, gamma). Candidates are scored in parallel with OpenMP.
SmoothingParams grid_search(std::span<const double> train, std::span<const double> validation,
                            InitMethod init = InitMethod::TrendAligned);
/// Serial reference for grid_search; same contract, same result.
SmoothingParams grid_search_reference(std::span<const double> train, std::span<const double> validation,
                                      InitMethod init = InitMethod::TrendAligned);
/// Score of every candidate in grid order.
std::vector<double> grid_scores(std::span<const double> train, std::span<const double> validation,
                                InitMethod init = InitMethod::TrendAligned);

}  // namespace driftlag::forecast
