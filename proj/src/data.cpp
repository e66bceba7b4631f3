#include "driftlag/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "driftlag/csv.hpp"
#include "driftlag/error.hpp"

namespace driftlag {

namespace {

std::int64_t parse_count(std::string_view cell) {
    cell = csv::trim(cell);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        // some JHU snapshots carry counts as "12.0"
        double d = 0;
        auto [p2, e2] = std::from_chars(cell.data(), cell.data() + cell.size(), d);
        if (e2 != std::errc() || p2 != cell.data() + cell.size() || d != std::floor(d)) {
            throw Error(ErrorCode::NonNumericCell, "'" + std::string(cell) + "'");
        }
        v = static_cast<std::int64_t>(d);
    }
    if (v < 0) throw Error(ErrorCode::OutOfRange, "negative cumulative count " + std::to_string(v));
    return v;
}

double parse_real(std::string_view cell, std::string_view column) {
    cell = csv::trim(cell);
    double v = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::NonNumericCell, std::string(column) + ": '" + std::string(cell) + "'");
    }
    return v;
}

// Parses the trailing date columns starting at `first`; they must be contiguous days.
Date parse_date_columns(const csv::Row& header, std::size_t first) {
    if (first >= header.size()) throw Error(ErrorCode::MalformedHeader, "no date columns");
    const Date start = Date::parse_us_short(csv::trim(header[first]));
    for (std::size_t c = first + 1; c < header.size(); ++c) {
        Date d;
        if (!Date::try_parse_us_short(csv::trim(header[c]), d)) {
            throw Error(ErrorCode::MalformedHeader, "bad date column '" + header[c] + "'");
        }
        if (d != start + static_cast<int>(c - first)) {
            throw Error(ErrorCode::NonContiguousDates, "column '" + header[c] + "' breaks the daily sequence");
        }
    }
    return start;
}

void accumulate_row(SeriesMap& out, const RegionId& id, const csv::Row& row, std::size_t first, std::size_t n_dates,
                    Date start, Measure measure) {
    if (row.size() != first + n_dates) {
        throw Error(ErrorCode::RaggedInput, "row for '" + id.name + "' has " + std::to_string(row.size()) +
                                                " cells, expected " + std::to_string(first + n_dates));
    }
    auto [it, inserted] = out.try_emplace(id);
    CumulativeSeries& s = it->second;
    if (inserted) {
        s.region = id;
        s.start_date = start;
        s.values.assign(n_dates, 0);
        s.measure = measure;
    }
    for (std::size_t k = 0; k < n_dates; ++k) s.values[k] += parse_count(row[first + k]);
}

std::size_t find_column(const csv::Row& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (csv::trim(header[i]) == name) return i;
    }
    return header.size();
}

}  // namespace

DailySeries DailySeries::slice(Date first, Date last) const {
    if (values.empty() || first < start_date || last > end_date() || last < first) {
        throw Error(ErrorCode::InsufficientData,
                    "range " + first.iso() + ".." + last.iso() + " outside series for '" + region.name + "'");
    }
    DailySeries out;
    out.region = region;
    out.start_date = first;
    const auto lo = index_of(first);
    const auto hi = index_of(last) + 1;
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(lo), values.begin() + static_cast<std::ptrdiff_t>(hi));
    for (auto c : clamped_days) {
        if (c >= lo && c < hi) out.clamped_days.push_back(c - lo);
    }
    return out;
}

std::string_view to_string(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::GatheringRestriction: return "gathering_restriction";
        case InterventionKind::SocialDistancing: return "social_distancing";
        case InterventionKind::SchoolClosure: return "school_closure";
        case InterventionKind::Lockdown: return "lockdown";
        case InterventionKind::MaskWearing: return "mask_wearing";
    }
    return "unknown";
}

InterventionKind parse_intervention_kind(std::string_view text) {
    std::string lower(csv::trim(text));
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto k : kAllInterventionKinds) {
        if (lower == to_string(k)) return k;
    }
    throw Error(ErrorCode::UnknownKind, "'" + std::string(text) + "'");
}

std::array<double, 9> meta_features(const RegionMeta& m) {
    return {static_cast<double>(m.population), m.density_per_km2,           m.urban_share,
            m.gdp_per_capita_usd,              m.gini,                      m.health_exp_per_capita_usd,
            m.hospital_beds_per_100k,          m.avg_temp_march_2020_c,     m.household_size};
}

AliasMap load_aliases(std::string_view csv_text) {
    AliasMap out;
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) return out;
    const auto& header = rows.front();
    const auto raw_col = find_column(header, "raw");
    const auto canon_col = find_column(header, "canonical");
    if (raw_col == header.size() || canon_col == header.size()) {
        throw Error(ErrorCode::MissingColumn, "aliases.csv needs raw,canonical");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() <= std::max(raw_col, canon_col)) throw Error(ErrorCode::RaggedInput, "aliases.csv");
        out[std::string(csv::trim(row[raw_col]))] = std::string(csv::trim(row[canon_col]));
    }
    return out;
}

std::string canonical_name(std::string_view raw, const AliasMap* aliases) {
    const auto name = csv::trim(raw);
    if (aliases) {
        if (auto it = aliases->find(name); it != aliases->end()) return it->second;
    }
    return std::string(name);
}

SeriesMap parse_jhu_global(std::string_view csv_text, Measure measure, const AliasMap* aliases) {
    const auto rows = csv::parse(csv_text, false);
    if (rows.empty()) throw Error(ErrorCode::MalformedHeader, "empty input");
    const auto& header = rows.front();
    static constexpr std::array<std::string_view, 4> expected = {"Province/State", "Country/Region", "Lat", "Long"};
    if (header.size() < expected.size()) throw Error(ErrorCode::MalformedHeader, "too few columns");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (csv::trim(header[i]) != expected[i]) {
            throw Error(ErrorCode::MalformedHeader,
                        "column " + std::to_string(i) + " is '" + header[i] + "', expected '" + std::string(expected[i]) + "'");
        }
    }
    const std::size_t first = expected.size();
    const Date start = parse_date_columns(header, first);
    const std::size_t n_dates = header.size() - first;

    SeriesMap out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const RegionId id{canonical_name(rows[r].at(1), aliases), RegionKind::Country};
        if (id.name.empty()) throw Error(ErrorCode::MalformedHeader, "row " + std::to_string(r) + " has no country");
        accumulate_row(out, id, rows[r], first, n_dates, start, measure);
    }
    return out;
}

namespace {

std::size_t first_date_column(const csv::Row& header, std::size_t after) {
    for (std::size_t c = after + 1; c < header.size(); ++c) {
        Date d;
        if (Date::try_parse_us_short(csv::trim(header[c]), d)) return c;
    }
    throw Error(ErrorCode::MalformedHeader, "no date columns");
}

}  // namespace

SeriesMap parse_jhu_us(std::string_view csv_text, Measure measure, const AliasMap* aliases) {
    const auto rows = csv::parse(csv_text, false);
    if (rows.empty()) throw Error(ErrorCode::MalformedHeader, "empty input");
    const auto& header = rows.front();
    const auto state_col = find_column(header, "Province_State");
    if (state_col == header.size()) throw Error(ErrorCode::MalformedHeader, "missing Province_State column");
    const std::size_t first = first_date_column(header, state_col);
    const Date start = parse_date_columns(header, first);
    const std::size_t n_dates = header.size() - first;

    SeriesMap out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const RegionId id{canonical_name(rows[r].at(state_col), aliases), RegionKind::UsState};
        if (id.name.empty()) throw Error(ErrorCode::MalformedHeader, "row " + std::to_string(r) + " has no state");
        accumulate_row(out, id, rows[r], first, n_dates, start, measure);
    }
    return out;
}

SeriesMap parse_jhu(std::string_view csv_text, Measure measure, const AliasMap* aliases) {
    const auto eol = csv_text.find('\n');
    const auto header = csv_text.substr(0, eol);
    if (header.find("Province_State") != std::string_view::npos) return parse_jhu_us(csv_text, measure, aliases);
    return parse_jhu_global(csv_text, measure, aliases);
}

std::map<std::string, std::int64_t> parse_jhu_us_population(std::string_view csv_text, const AliasMap* aliases) {
    std::map<std::string, std::int64_t> out;
    const auto rows = csv::parse(csv_text, false);
    if (rows.empty()) return out;
    const auto state_col = find_column(rows.front(), "Province_State");
    const auto pop_col = find_column(rows.front(), "Population");
    if (state_col == rows.front().size() || pop_col == rows.front().size()) return out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        out[canonical_name(rows[r].at(state_col), aliases)] += parse_count(rows[r].at(pop_col));
    }
    return out;
}

std::vector<RegionId> regions_above(const SeriesMap& series, std::int64_t min_cumulative, Date cutoff) {
    std::vector<RegionId> out;
    for (const auto& [id, s] : series) {
        if (s.values.empty() || cutoff < s.start_date) continue;
        const Date at = std::min(cutoff, s.end_date());
        if (s.values[static_cast<std::size_t>(at - s.start_date)] > min_cumulative) out.push_back(id);
    }
    return out;
}

DailySeries to_daily(const CumulativeSeries& cum) {
    if (cum.values.size() < 2) throw Error(ErrorCode::TooShort, "need at least two cumulative values");
    DailySeries out;
    out.region = cum.region;
    out.start_date = cum.start_date;
    out.values.resize(cum.values.size());
    out.values[0] = static_cast<double>(cum.values[0]);
    for (std::size_t i = 1; i < cum.values.size(); ++i) {
        const auto diff = cum.values[i] - cum.values[i - 1];
        if (diff < 0) out.clamped_days.push_back(i);
        out.values[i] = static_cast<double>(std::max<std::int64_t>(0, diff));
    }
    return out;
}

std::vector<InterventionEvent> load_interventions(std::string_view csv_text, const AliasMap* aliases) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw Error(ErrorCode::MissingColumn, "interventions: empty file");
    const auto& header = rows.front();
    const auto region_col = find_column(header, "region");
    const auto kind_col = find_column(header, "kind");
    const auto date_col = find_column(header, "date");
    if (region_col == header.size() || kind_col == header.size() || date_col == header.size()) {
        throw Error(ErrorCode::MissingColumn, "interventions: expected region,kind,date");
    }
    std::vector<InterventionEvent> out;
    std::set<std::pair<std::string, InterventionKind>> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) throw Error(ErrorCode::RaggedInput, "interventions row " + std::to_string(r));
        InterventionEvent ev{canonical_name(row[region_col], aliases), parse_intervention_kind(row[kind_col]),
                             Date::parse_iso(csv::trim(row[date_col]))};
        if (!seen.emplace(ev.region, ev.kind).second) {
            throw Error(ErrorCode::DuplicateEvent, ev.region + "," + std::string(to_string(ev.kind)));
        }
        out.push_back(std::move(ev));
    }
    return out;
}

std::map<std::string, RegionMeta> load_region_meta(std::string_view csv_text, const AliasMap* aliases) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw Error(ErrorCode::MissingColumn, "region_meta: empty file");
    const auto& header = rows.front();
    const auto region_col = find_column(header, "region");
    if (region_col == header.size()) throw Error(ErrorCode::MissingColumn, "region");
    std::array<std::size_t, 9> cols{};
    for (std::size_t k = 0; k < kRegionMetaColumns.size(); ++k) {
        cols[k] = find_column(header, kRegionMetaColumns[k]);
        if (cols[k] == header.size()) throw Error(ErrorCode::MissingColumn, std::string(kRegionMetaColumns[k]));
    }

    auto in_unit = [](double v, std::string_view col) {
        if (v < 0.0 || v > 1.0) throw Error(ErrorCode::OutOfRange, std::string(col) + " must lie in [0,1]");
    };
    auto positive = [](double v, std::string_view col) {
        if (!(v > 0.0)) throw Error(ErrorCode::OutOfRange, std::string(col) + " must be positive");
    };

    std::map<std::string, RegionMeta> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) throw Error(ErrorCode::RaggedInput, "region_meta row " + std::to_string(r));
        RegionMeta m;
        m.region = canonical_name(row[region_col], aliases);
        const double pop = parse_real(row[cols[0]], "population");
        if (!(pop > 0) || pop != std::floor(pop)) throw Error(ErrorCode::OutOfRange, "population must be a positive integer");
        m.population = static_cast<std::int64_t>(pop);
        m.density_per_km2 = parse_real(row[cols[1]], kRegionMetaColumns[1]);
        m.urban_share = parse_real(row[cols[2]], kRegionMetaColumns[2]);
        m.gdp_per_capita_usd = parse_real(row[cols[3]], kRegionMetaColumns[3]);
        m.gini = parse_real(row[cols[4]], kRegionMetaColumns[4]);
        m.health_exp_per_capita_usd = parse_real(row[cols[5]], kRegionMetaColumns[5]);
        m.hospital_beds_per_100k = parse_real(row[cols[6]], kRegionMetaColumns[6]);
        m.avg_temp_march_2020_c = parse_real(row[cols[7]], kRegionMetaColumns[7]);
        m.household_size = parse_real(row[cols[8]], kRegionMetaColumns[8]);
        positive(m.density_per_km2, kRegionMetaColumns[1]);
        in_unit(m.urban_share, kRegionMetaColumns[2]);
        positive(m.gdp_per_capita_usd, kRegionMetaColumns[3]);
        in_unit(m.gini, kRegionMetaColumns[4]);
        positive(m.health_exp_per_capita_usd, kRegionMetaColumns[5]);
        positive(m.hospital_beds_per_100k, kRegionMetaColumns[6]);
        positive(m.household_size, kRegionMetaColumns[8]);
        if (!out.emplace(m.region, m).second) throw Error(ErrorCode::DuplicateEvent, "region_meta: duplicate " + m.region);
    }
    return out;
}

std::optional<Date> death_threshold_date(const CumulativeSeries& deaths, std::int64_t population, double per_capita) {
    if (deaths.measure != Measure::Deaths) throw Error(ErrorCode::InvalidArgument, "death threshold needs a deaths series");
    if (population <= 0) throw Error(ErrorCode::OutOfRange, "population must be positive");
    // Relative slack absorbs the representation error of per_capita (60 / 60e6 must hit 1e-6).
    const double needed = per_capita * static_cast<double>(population) * (1.0 - 1e-12);
    for (std::size_t i = 0; i < deaths.values.size(); ++i) {
        if (static_cast<double>(deaths.values[i]) >= needed) return deaths.start_date + static_cast<int>(i);
    }
    return std::nullopt;
}

std::vector<InterventionEvent> events_for(std::span<const InterventionEvent> events, std::string_view region) {
    std::vector<InterventionEvent> out;
    for (const auto& e : events) {
        if (e.region == region) out.push_back(e);
    }
    return out;
}

}  // namespace driftlag
