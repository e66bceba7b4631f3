#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlag/data.hpp"
#include "driftlag/pipeline.hpp"

namespace driftlag::synth {

enum class Noise { None, Poisson };

struct SyntheticSpec {
    int n_days = 60;
    double base_level = 20.0;
    double growth_pre = 1.25;
    double growth_post = 1.03;
    int break_day = 30;
    double season_amplitude = 0.0;
    Noise noise = Noise::None;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Weekend under-reporting shape, multiplied by season_amplitude * mean.
inline constexpr std::array<double, 7> kWeeklyPattern = {0.0, 0.1, 0.15, 0.15, 0.1, -0.25, -0.25};

/// Noise-free mean per day: geometric growth that switches rate at the break
/// without a level jump, times the weekly pattern.
std::vector<double> expected_curve(const SyntheticSpec& spec);

DailySeries generate(const SyntheticSpec& spec, Date start = Date::from_ymd(2020, 1, 22));

struct DelayConfig {
    pipeline::PipelineConfig pipeline;
    /// The synthetic first NPI is placed this many days before the break.
    int npi_lead_days = 14;
};

/// Detected drift day minus break day, or nullopt when nothing is detected.
std::optional<int> measure_detection_delay(const SyntheticSpec& spec, const DelayConfig& cfg = {});

/// `key = value` lines (# comments) with the SyntheticSpec field names.
SyntheticSpec parse_spec(std::string_view text);

/// `region,date,daily`
std::string to_csv(const DailySeries& series);

}  // namespace driftlag::synth
