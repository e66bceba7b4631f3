#include "driftlag/synth.hpp"

#include <charconv>
#include <cmath>
#include <random>

#include "driftlag/config.hpp"
#include "driftlag/error.hpp"
#include "driftlag/rng.hpp"

namespace driftlag::synth {

void SyntheticSpec::validate() const {
    if (n_days < 1) throw Error(ErrorCode::OutOfRange, "n_days must be positive");
    if (!(base_level > 0.0)) throw Error(ErrorCode::OutOfRange, "base_level must be positive");
    for (double g : {growth_pre, growth_post}) {
        if (!(g > 0.8 && g < 1.5)) throw Error(ErrorCode::OutOfRange, "growth factors must lie in (0.8, 1.5)");
    }
    if (break_day < 0 || break_day >= n_days) throw Error(ErrorCode::OutOfRange, "break_day must lie in [0, n_days)");
    if (!(season_amplitude >= 0.0)) throw Error(ErrorCode::OutOfRange, "season_amplitude must be >= 0");
}

std::vector<double> expected_curve(const SyntheticSpec& spec) {
    spec.validate();
    std::vector<double> mu(static_cast<std::size_t>(spec.n_days));
    const double at_break = spec.base_level * std::pow(spec.growth_pre, spec.break_day);
    for (int t = 0; t < spec.n_days; ++t) {
        const double trend = t <= spec.break_day ? spec.base_level * std::pow(spec.growth_pre, t)
                                                 : at_break * std::pow(spec.growth_post, t - spec.break_day);
        const double season = 1.0 + spec.season_amplitude * kWeeklyPattern[static_cast<std::size_t>(t % 7)];
        mu[static_cast<std::size_t>(t)] = std::max(trend * season, 0.0);
    }
    return mu;
}

DailySeries generate(const SyntheticSpec& spec, Date start) {
    DailySeries out;
    out.region = RegionId{"synthetic", RegionKind::Country};
    out.start_date = start;
    out.values = expected_curve(spec);
    if (spec.noise == Noise::Poisson) {
        auto eng = rng::substream(spec.seed, "synth-noise");
        for (auto& v : out.values) {
            if (v > 0.0) v = static_cast<double>(std::poisson_distribution<long long>(v)(eng));
        }
    }
    return out;
}

std::optional<int> measure_detection_delay(const SyntheticSpec& spec, const DelayConfig& cfg) {
    const auto series = generate(spec);
    const Date first_npi = series.start_date + (spec.break_day - cfg.npi_lead_days);
    const Date monitor_start = first_npi + cfg.pipeline.window_offset_days + 1;
    if (first_npi < series.start_date || monitor_start > series.date_at(static_cast<std::size_t>(spec.break_day))) {
        throw Error(ErrorCode::InvalidArgument, "break day must fall inside the monitoring window");
    }
    const InterventionEvent npi{series.region.name, InterventionKind::GatheringRestriction, first_npi};
    const auto run = pipeline::run_region(series, std::span(&npi, 1), cfg.pipeline);
    if (!run.drift.drift_date) return std::nullopt;
    return *run.drift.drift_date - series.date_at(static_cast<std::size_t>(spec.break_day));
}

SyntheticSpec parse_spec(std::string_view text) {
    const auto kv = config::parse_key_values(text);
    SyntheticSpec s;
    for (const auto& [key, value] : kv) {
        if (key == "n_days") s.n_days = config::to_int(key, value);
        else if (key == "base_level") s.base_level = config::to_double(key, value);
        else if (key == "growth_pre") s.growth_pre = config::to_double(key, value);
        else if (key == "growth_post") s.growth_post = config::to_double(key, value);
        else if (key == "break_day") s.break_day = config::to_int(key, value);
        else if (key == "season_amplitude") s.season_amplitude = config::to_double(key, value);
        else if (key == "seed") s.seed = config::to_uint64(key, value);
        else if (key == "noise") {
            if (value == "none") s.noise = Noise::None;
            else if (value == "poisson") s.noise = Noise::Poisson;
            else throw Error(ErrorCode::InvalidArgument, "noise must be none or poisson");
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown synth key '" + key + "'");
        }
    }
    s.validate();
    return s;
}

std::string to_csv(const DailySeries& series) {
    std::string out = "region,date,daily\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof buf, series.values[i]);
        out += series.region.name + "," + series.date_at(i).iso() + "," + std::string(buf, res.ptr) + "\n";
    }
    return out;
}

}  // namespace driftlag::synth
