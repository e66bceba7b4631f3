#include "driftlag/lag.hpp"

#include <cmath>

#include "driftlag/error.hpp"

namespace driftlag::lag {

std::vector<LagRecord> compute_lags(std::optional<Date> drift_date, std::span<const InterventionEvent> events) {
    if (!drift_date) throw Error(ErrorCode::NoDrift, "no drift detected");
    std::vector<LagRecord> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back({e.region, e.kind, e.date, *drift_date, *drift_date - e.date});
    return out;
}

std::vector<LagSummary> summarize_lags(std::span<const LagRecord> records) {
    if (records.empty()) throw Error(ErrorCode::EmptyInput, "no lag records to summarize");
    std::vector<LagSummary> out;
    for (auto kind : kAllInterventionKinds) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : records) {
            if (r.kind == kind) {
                sum += r.lag_days;
                ++n;
            }
        }
        if (n == 0) continue;
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : records) {
            if (r.kind == kind) ss += (r.lag_days - mean) * (r.lag_days - mean);
        }
        out.push_back({kind, mean, n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0, n});
    }
    return out;
}

ReactionTime reaction_time(const InterventionEvent& event, std::optional<Date> threshold_date) {
    if (!threshold_date) throw Error(ErrorCode::ThresholdNotReached, "no death-threshold date for " + event.region);
    return {event.region, event.kind, event.date - *threshold_date};
}

RegressionDataset regression_dataset(std::span<const RegionOutcome> outcomes, std::span<const InterventionEvent> events,
                                     const std::map<std::string, RegionMeta>& meta) {
    RegressionDataset ds;
    for (auto kind : kReactionKinds) ds.feature_names.push_back("reaction_time_" + std::string(to_string(kind)));
    for (auto col : kRegionMetaColumns) ds.feature_names.emplace_back(col);

    for (const auto& o : outcomes) {
        if (!o.drift_date) {
            ds.excluded[o.region] = "no drift detected";
            continue;
        }
        if (!o.threshold_date) {
            ds.excluded[o.region] = "death threshold never reached";
            continue;
        }
        std::vector<double> row;
        std::string missing;
        for (auto kind : kReactionKinds) {
            const InterventionEvent* found = nullptr;
            for (const auto& e : events) {
                if (e.region == o.region && e.kind == kind) found = &e;
            }
            if (!found) {
                missing = std::string(to_string(kind));
                break;
            }
            row.push_back(static_cast<double>(reaction_time(*found, o.threshold_date).days));
        }
        if (!missing.empty()) {
            ds.excluded[o.region] = "missing intervention " + missing;
            continue;
        }
        const auto it = meta.find(o.region);
        if (it == meta.end()) throw Error(ErrorCode::MissingMetadata, "no metadata row for " + o.region);
        for (double v : meta_features(it->second)) row.push_back(v);
        ds.regions.push_back(o.region);
        ds.features.push_back(std::move(row));
        ds.target.push_back(static_cast<double>(*o.drift_date - *o.threshold_date));
    }
    return ds;
}

}  // namespace driftlag::lag
