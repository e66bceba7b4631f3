#include "driftlag/config.hpp"

#include <charconv>
#include <cstdio>

#include "driftlag/csv.hpp"
#include "driftlag/error.hpp"

namespace driftlag::config {

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        auto line = csv::trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty() || line.front() == '#' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto key = csv::trim(line.substr(0, eq));
        auto value = csv::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        } else if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
            value = csv::trim(value.substr(0, hash));
        }
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidArgument, std::string(key) + ": '" + std::string(value) + "' is not a number");
    }
    return v;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

int to_int(std::string_view key, std::string_view value) { return parse_number<int>(key, value); }
double to_double(std::string_view key, std::string_view value) { return parse_number<double>(key, value); }
std::uint64_t to_uint64(std::string_view key, std::string_view value) { return parse_number<std::uint64_t>(key, value); }

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw Error(ErrorCode::InvalidArgument, std::string(key) + ": expected true/false");
}

std::vector<std::string> to_list(std::string_view value) {
    std::vector<std::string> out;
    for (const auto& row : csv::parse(value, false)) {
        for (const auto& cell : row) {
            const auto t = csv::trim(cell);
            if (!t.empty()) out.emplace_back(t);
        }
    }
    return out;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    if (key == "cases") cases_paths = to_list(value);
    else if (key == "deaths") deaths_paths = to_list(value);
    else if (key == "npis") npis_path = value;
    else if (key == "meta") meta_path = value;
    else if (key == "aliases") aliases_path = value;
    else if (key == "out") out_dir = value;
    else if (key == "detect_out") detect_out_dir = value;
    else if (key == "countries") countries = to_list(value);
    else if (key == "include_us_states") include_us_states = to_bool(key, value);
    else if (key == "us_min_cumulative") us_min_cumulative = parse_number<std::int64_t>(key, value);
    else if (key == "us_cutoff") us_cutoff = Date::parse_iso(value);
    else if (key == "regions") regions = to_list(value);
    else if (key == "window_offset_days") window_offset_days = to_int(key, value);
    else if (key == "init_method") init = forecast::parse_init_method(value);
    else if (key == "pht_threshold") pht.threshold = to_double(key, value);
    else if (key == "pht_min_instances") pht.min_instances = static_cast<std::size_t>(to_uint64(key, value));
    else if (key == "pht_delta") pht.delta = to_double(key, value);
    else if (key == "pht_forgetting") pht.forgetting = to_double(key, value);
    else if (key == "death_per_capita") death_per_capita = to_double(key, value);
    else if (key == "seed") seed = to_uint64(key, value);
    else if (key == "cv_outer_folds") cv.k_outer = static_cast<std::size_t>(to_uint64(key, value));
    else if (key == "cv_inner_folds") cv.search.k_inner = static_cast<std::size_t>(to_uint64(key, value));
    else if (key == "lambda_draws") cv.search.n_draws = static_cast<std::size_t>(to_uint64(key, value));
    else if (key == "lambda_min") cv.search.lambda_lo = to_double(key, value);
    else if (key == "lambda_max") cv.search.lambda_hi = to_double(key, value);
    else if (key == "cd_tolerance") cv.search.fit.tol = to_double(key, value);
    else if (key == "cd_max_sweeps") cv.search.fit.max_sweeps = static_cast<std::size_t>(to_uint64(key, value));
    else if (key == "standardize_within_fold") cv.standardize_within_fold = to_bool(key, value);
    else if (key == "cv_metric") {
        if (value == "mse") cv.search.metric = lasso::CvMetric::MeanSquaredError;
        else if (value == "mae") cv.search.metric = lasso::CvMetric::MeanAbsoluteError;
        else throw Error(ErrorCode::InvalidArgument, "cv_metric must be mse or mae");
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
    }
}

void RunConfig::apply_file(std::string_view text) {
    for (const auto& [k, v] : parse_key_values(text)) set(k, v);
}

std::vector<std::string> RunConfig::echo() const {
    std::vector<std::string> out;
    auto add = [&out](std::string_view k, const std::string& v) { out.push_back(std::string(k) + " = " + v); };
    add("countries", join(countries));
    add("include_us_states", include_us_states ? "true" : "false");
    add("us_min_cumulative", std::to_string(us_min_cumulative));
    add("us_cutoff", us_cutoff.iso());
    add("regions", join(regions));
    add("window_offset_days", std::to_string(window_offset_days));
    add("init_method", forecast::to_string(init));
    add("grid", "0.1..0.9 step 0.1 (alpha,beta,gamma), 3 validation days");
    add("pht_threshold", fmt_double(pht.threshold));
    add("pht_min_instances", std::to_string(pht.min_instances));
    add("pht_delta", fmt_double(pht.delta));
    add("pht_forgetting", fmt_double(pht.forgetting));
    add("death_per_capita", fmt_double(death_per_capita));
    add("seed", std::to_string(seed));
    add("cv_outer_folds", std::to_string(cv.k_outer));
    add("cv_inner_folds", std::to_string(cv.search.k_inner));
    add("lambda_draws", std::to_string(cv.search.n_draws));
    add("lambda_min", fmt_double(cv.search.lambda_lo));
    add("lambda_max", fmt_double(cv.search.lambda_hi));
    add("cv_metric", cv.search.metric == lasso::CvMetric::MeanSquaredError ? "mse" : "mae");
    add("cd_tolerance", fmt_double(cv.search.fit.tol));
    add("cd_max_sweeps", std::to_string(cv.search.fit.max_sweeps));
    add("standardize_within_fold", cv.standardize_within_fold ? "true" : "false");
    add("lasso_objective", "(1/(2n))*||y - b0 - X b||^2 + lambda*||b||_1");
    return out;
}

}  // namespace driftlag::config
