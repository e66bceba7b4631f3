#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlag/date.hpp"

namespace driftlag {

enum class RegionKind { Country, UsState };

struct RegionId {
    std::string name;
    RegionKind kind = RegionKind::Country;

    auto operator<=>(const RegionId&) const = default;
};

enum class Measure { Cases, Deaths };

struct CumulativeSeries {
    RegionId region;
    Date start_date;
    std::vector<std::int64_t> values;
    Measure measure = Measure::Cases;

    Date end_date() const { return start_date + static_cast<int>(values.size()) - 1; }
};

/// Daily new counts. Values are reals so synthetic streams share the type;
/// parsed data always holds whole numbers.
struct DailySeries {
    RegionId region;
    Date start_date;
    std::vector<double> values;
    std::vector<std::size_t> clamped_days;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<int>(i); }
    Date end_date() const { return start_date + static_cast<int>(values.size()) - 1; }
    bool contains(Date d) const { return !values.empty() && d >= start_date && d <= end_date(); }
    std::size_t index_of(Date d) const { return static_cast<std::size_t>(d - start_date); }
    /// Inclusive date range; throws InsufficientData when the range leaves the series.
    DailySeries slice(Date first, Date last) const;
};

enum class InterventionKind { GatheringRestriction, SocialDistancing, SchoolClosure, Lockdown, MaskWearing };

inline constexpr std::array<InterventionKind, 5> kAllInterventionKinds = {
    InterventionKind::GatheringRestriction, InterventionKind::SocialDistancing, InterventionKind::SchoolClosure,
    InterventionKind::Lockdown, InterventionKind::MaskWearing};

/// snake_case name used in the artifact's csv files.
std::string_view to_string(InterventionKind kind);
InterventionKind parse_intervention_kind(std::string_view text);

// Artifact-owned files identify regions by exact (trimmed) name only.
struct InterventionEvent {
    std::string region;
    InterventionKind kind = InterventionKind::GatheringRestriction;
    Date date;
};

struct RegionMeta {
    std::string region;
    std::int64_t population = 0;
    double density_per_km2 = 0;
    double urban_share = 0;
    double gdp_per_capita_usd = 0;
    double gini = 0;
    double health_exp_per_capita_usd = 0;
    double hospital_beds_per_100k = 0;
    double avg_temp_march_2020_c = 0;
    double household_size = 0;
};

/// Column names of region_meta.csv after `region`, in feature order.
inline constexpr std::array<std::string_view, 9> kRegionMetaColumns = {
    "population",     "density_per_km2",           "urban_share",
    "gdp_per_capita_usd", "gini",                  "health_exp_per_capita_usd",
    "hospital_beds_per_100k", "avg_temp_march_2020_c", "household_size"};

std::array<double, 9> meta_features(const RegionMeta& meta);

using SeriesMap = std::map<RegionId, CumulativeSeries>;
/// raw name -> canonical name
using AliasMap = std::map<std::string, std::string, std::less<>>;

AliasMap load_aliases(std::string_view csv_text);
std::string canonical_name(std::string_view raw, const AliasMap* aliases);

/// JHU CSSE global wide format; province rows are summed per country.
SeriesMap parse_jhu_global(std::string_view csv_text, Measure measure, const AliasMap* aliases = nullptr);
/// JHU CSSE US wide format; county rows are summed per state.
SeriesMap parse_jhu_us(std::string_view csv_text, Measure measure, const AliasMap* aliases = nullptr);
/// Dispatches on the header to one of the two parsers above.
SeriesMap parse_jhu(std::string_view csv_text, Measure measure, const AliasMap* aliases = nullptr);
/// State populations from the `Population` column of the JHU US deaths file (empty if absent).
std::map<std::string, std::int64_t> parse_jhu_us_population(std::string_view csv_text,
                                                            const AliasMap* aliases = nullptr);

/// Regions whose cumulative count on `cutoff` (or the last day before it) exceeds `min_cumulative`.
std::vector<RegionId> regions_above(const SeriesMap& series, std::int64_t min_cumulative, Date cutoff);

DailySeries to_daily(const CumulativeSeries& cum);

std::vector<InterventionEvent> load_interventions(std::string_view csv_text, const AliasMap* aliases = nullptr);
std::map<std::string, RegionMeta> load_region_meta(std::string_view csv_text, const AliasMap* aliases = nullptr);

/// First date whose cumulative deaths reach `per_capita * population`.
std::optional<Date> death_threshold_date(const CumulativeSeries& deaths, std::int64_t population,
                                         double per_capita = 1e-6);

std::vector<InterventionEvent> events_for(std::span<const InterventionEvent> events, std::string_view region);

}  // namespace driftlag
