#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftlag/data.hpp"
#include "driftlag/date.hpp"

namespace driftlag::lag {

/// drift date - NPI date in whole days (positive when the NPI came first).
struct LagRecord {
    std::string region;
    InterventionKind kind = InterventionKind::GatheringRestriction;
    Date npi_date;
    Date drift_date;
    int lag_days = 0;
};

struct LagSummary {
    InterventionKind kind = InterventionKind::GatheringRestriction;
    double mean_days = 0.0;
    double sd_days = 0.0;  // sample sd; 0 for a single record
    std::size_t n = 0;
};

/// NPI date - death-threshold date (negative when the region acted before the threshold).
struct ReactionTime {
    std::string region;
    InterventionKind kind = InterventionKind::GatheringRestriction;
    int days = 0;
};

std::vector<LagRecord> compute_lags(std::optional<Date> drift_date, std::span<const InterventionEvent> events);

/// One row per kind present, in InterventionKind order.
std::vector<LagSummary> summarize_lags(std::span<const LagRecord> records);

ReactionTime reaction_time(const InterventionEvent& event, std::optional<Date> threshold_date);

/// Everything the regression needs about one region after detection.
struct RegionOutcome {
    std::string region;
    std::optional<Date> drift_date;
    std::optional<Date> threshold_date;
};

/// The four NPIs used as reaction-time features; mask wearing is never a feature.
inline constexpr std::array<InterventionKind, 4> kReactionKinds = {
    InterventionKind::GatheringRestriction, InterventionKind::SocialDistancing, InterventionKind::SchoolClosure,
    InterventionKind::Lockdown};

struct RegressionDataset {
    std::vector<std::string> regions;             // row labels
    std::vector<std::string> feature_names;       // 13 columns
    std::vector<std::vector<double>> features;    // rows x 13
    std::vector<double> target;                   // drift date - threshold date
    std::map<std::string, std::string> excluded;  // region -> reason
};

/// Rows for regions with a drift date, a threshold date and all four
/// reaction-time NPIs; other regions land in `excluded`. Throws MissingMetadata
/// when an otherwise eligible region has no metadata row.
RegressionDataset regression_dataset(std::span<const RegionOutcome> outcomes,
                                     std::span<const InterventionEvent> events,
                                     const std::map<std::string, RegionMeta>& meta);

}  // namespace driftlag::lag
