#include "driftlag/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "driftlag/error.hpp"
#include "driftlag/smape.hpp"

namespace driftlag::forecast {

void SmoothingParams::validate() const {
    for (double v : {alpha, beta, gamma}) {
        if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::OutOfRange, "smoothing parameters must lie in (0,1)");
    }
}

std::vector<double> floor_counts(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    for (auto& v : out) v = std::max(v, 1.0);
    return out;
}

TrainingWindow training_window(const DailySeries& series, std::span<const InterventionEvent> events, int offset_days) {
    if (events.empty()) throw Error(ErrorCode::NoInterventions, "no interventions for '" + series.region.name + "'");
    const auto first = std::min_element(events.begin(), events.end(),
                                        [](const auto& a, const auto& b) { return a.date < b.date; })->date;
    const Date end = first + offset_days;
    if (series.values.empty() || end >= series.end_date() || end < series.start_date) {
        throw Error(ErrorCode::InsufficientData,
                    "training window ending " + end.iso() + " leaves no data to monitor for '" + series.region.name + "'");
    }
    return TrainingWindow{series.slice(series.start_date, end), first, end};
}

InitMethod parse_init_method(std::string_view text) {
    if (text == "trend_aligned") return InitMethod::TrendAligned;
    if (text == "week_mean") return InitMethod::WeekMean;
    throw Error(ErrorCode::InvalidArgument, "unknown init method '" + std::string(text) + "'");
}

std::string to_string(InitMethod m) { return m == InitMethod::WeekMean ? "week_mean" : "trend_aligned"; }

HoltWintersState init_state(std::span<const double> train, InitMethod method) {
    if (train.size() < 2 * kSeasonLength) {
        throw Error(ErrorCode::TooShort, "initialisation needs two full seasons, got " + std::to_string(train.size()));
    }
    const auto week1 = train.subspan(0, kSeasonLength);
    const auto week2 = train.subspan(kSeasonLength, kSeasonLength);
    const double mean1 = std::accumulate(week1.begin(), week1.end(), 0.0) / kSeasonLength;
    const double mean2 = std::accumulate(week2.begin(), week2.end(), 0.0) / kSeasonLength;

    HoltWintersState s;
    s.trend = mean1 > 0.0 ? std::max(std::pow(mean2 / mean1, 1.0 / kSeasonLength), kFloor) : 1.0;
    if (method == InitMethod::WeekMean) {
        s.level = std::max(mean1, 1.0);
        for (std::size_t j = 0; j < kSeasonLength; ++j) s.seasonal[j] = week1[j] - s.level;
        return s;
    }
    // the first week's mean sits mid-week; pull it back to the level one step before day 0
    double growth_mean = 0.0;
    for (int j = 1; j <= kSeasonLength; ++j) growth_mean += std::pow(s.trend, j);
    growth_mean /= kSeasonLength;
    s.level = std::max(mean1 / growth_mean, 1.0);
    for (std::size_t j = 0; j < kSeasonLength; ++j) {
        s.seasonal[j] = week1[j] - s.level * std::pow(s.trend, static_cast<double>(j + 1));
    }
    s.season_index = 0;
    return s;
}

HoltWintersState hw_update(const HoltWintersState& state, double y, const SmoothingParams& p) {
    if (!std::isfinite(y)) throw Error(ErrorCode::NonFinite, "observation is not finite");
    const auto idx = static_cast<std::size_t>(state.season_index);
    const double s_old = state.seasonal[idx];
    const double projected = state.level * state.trend;

    HoltWintersState next = state;
    next.level = std::max(p.alpha * (y - s_old) + (1.0 - p.alpha) * projected, kFloor);
    next.trend = std::max(p.beta * (next.level / state.level) + (1.0 - p.beta) * state.trend, kFloor);
    next.seasonal[idx] = p.gamma * (y - projected) + (1.0 - p.gamma) * s_old;
    next.season_index = (state.season_index + 1) % kSeasonLength;
    return next;
}

ForecastSeries hw_forecast(const HoltWintersState& state, int horizon, Date start_date) {
    if (horizon < 1) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
    ForecastSeries out{start_date, {}};
    out.values.reserve(static_cast<std::size_t>(horizon));
    double growth = 1.0;
    for (int h = 1; h <= horizon; ++h) {
        growth *= state.trend;
        const auto idx = static_cast<std::size_t>((state.season_index + h - 1) % kSeasonLength);
        out.values.push_back(std::max(state.level * growth + state.seasonal[idx], kFloor));
    }
    return out;
}

FitResult fit_from(const HoltWintersState& initial, std::span<const double> train, const SmoothingParams& p,
                   Date start_date) {
    FitResult out{{start_date, {}}, initial};
    out.one_step.values.reserve(train.size());
    for (double y : train) {
        out.one_step.values.push_back(std::max(out.final_state.one_step(), kFloor));
        out.final_state = hw_update(out.final_state, y, p);
    }
    return out;
}

FitResult fit(std::span<const double> train, const SmoothingParams& p, Date start_date, InitMethod init) {
    return fit_from(init_state(train, init), train, p, start_date);
}

std::array<double, 9> grid_values() {
    std::array<double, 9> v{};
    for (int i = 0; i < 9; ++i) v[static_cast<std::size_t>(i)] = (i + 1) / 10.0;
    return v;
}

SmoothingParams grid_candidate(std::size_t index) {
    const auto g = grid_values();
    return SmoothingParams{g[index / 81], g[(index / 9) % 9], g[index % 9]};
}

double validation_score(std::span<const double> train, std::span<const double> validation, const SmoothingParams& p,
                        InitMethod init) {
    const auto state = fit(train, p, Date(), init).final_state;
    const auto fc = hw_forecast(state, static_cast<int>(validation.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < validation.size(); ++i) total += drift::smape(validation[i], fc.values[i]);
    return total / static_cast<double>(validation.size());
}

namespace {

void check_grid_inputs(std::span<const double> train, std::span<const double> validation) {
    if (validation.size() != 3) {
        throw Error(ErrorCode::InvalidArgument, "grid search validates on exactly 3 days, got " +
                                                    std::to_string(validation.size()));
    }
    if (train.size() < 2 * kSeasonLength) throw Error(ErrorCode::TooShort, "training slice shorter than 14 days");
}

}  // namespace

std::vector<double> grid_scores(std::span<const double> train, std::span<const double> validation,
                                InitMethod init) {
    check_grid_inputs(train, validation);
    std::vector<double> scores(kGridSize);
    const auto n = static_cast<long>(kGridSize);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const double score = validation_score(train, validation, grid_candidate(static_cast<std::size_t>(i)), init);
        scores[static_cast<std::size_t>(i)] = std::isnan(score) ? std::numeric_limits<double>::infinity() : score;
    }
    return scores;
}

SmoothingParams grid_search(std::span<const double> train, std::span<const double> validation,
                            InitMethod init) {
    const auto scores = grid_scores(train, validation, init);
    // grid order is lexicographic in (alpha, beta, gamma), so the first minimum wins ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) best = i;
    }
    return grid_candidate(best);
}

SmoothingParams grid_search_reference(std::span<const double> train, std::span<const double> validation,
                                      InitMethod init) {
    check_grid_inputs(train, validation);
    const auto g = grid_values();
    SmoothingParams best{g[0], g[0], g[0]};
    double best_score = std::numeric_limits<double>::infinity();
    bool first = true;
    for (double a : g) {
        for (double b : g) {
            for (double c : g) {
                const SmoothingParams p{a, b, c};
                double score = validation_score(train, validation, p, init);
                if (std::isnan(score)) score = std::numeric_limits<double>::infinity();
                if (first || score < best_score) {
                    first = false;
                    best_score = score;
                    best = p;
                }
            }
        }
    }
    return best;
}

}  // namespace driftlag::forecast
