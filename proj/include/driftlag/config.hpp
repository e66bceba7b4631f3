#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlag/date.hpp"
#include "driftlag/drift.hpp"
#include "driftlag/forecast.hpp"
#include "driftlag/lasso.hpp"

namespace driftlag::config {

/// Flat TOML-style `key = value` pairs in file order. Blank lines, `#`
/// comments and `[section]` headers are skipped; values may be quoted.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

int to_int(std::string_view key, std::string_view value);
double to_double(std::string_view key, std::string_view value);
std::uint64_t to_uint64(std::string_view key, std::string_view value);
bool to_bool(std::string_view key, std::string_view value);
/// Comma separated list, entries trimmed.
std::vector<std::string> to_list(std::string_view value);

struct RunConfig {
    std::vector<std::string> cases_paths;
    std::vector<std::string> deaths_paths;
    std::string npis_path;
    std::string meta_path;
    std::string aliases_path;
    std::string out_dir = "out";
    std::string detect_out_dir;

    std::vector<std::string> countries = {"Austria", "Belgium", "Germany", "Italy", "Norway",
                                          "Spain",   "Sweden",  "Switzerland", "United Kingdom"};
    bool include_us_states = true;
    std::int64_t us_min_cumulative = 10000;
    Date us_cutoff = Date::from_ymd(2020, 5, 13);
    /// Optional explicit region filter applied after the selection above.
    std::vector<std::string> regions;

    int window_offset_days = 7;
    forecast::InitMethod init = forecast::InitMethod::TrendAligned;
    drift::PhtConfig pht;
    double death_per_capita = 1e-6;

    std::uint64_t seed = 2020;
    lasso::NestedCvConfig cv;

    /// Applies one key; throws InvalidArgument on unknown keys.
    void set(std::string_view key, std::string_view value);
    void apply_file(std::string_view text);
    /// Effective configuration as `key = value` lines, stable order.
    std::vector<std::string> echo() const;
};

}  // namespace driftlag::config
