#pragma once

#include <optional>
#include <string>
#include <vector>

#include "driftlag/data.hpp"
#include "driftlag/forecast.hpp"

namespace driftlag::chart {

struct ChartInput {
    std::string title;
    DailySeries actuals;
    /// In-sample fit followed by the static forecast; may be empty.
    forecast::ForecastSeries model;
    std::vector<InterventionEvent> events;
    std::optional<Date> threshold_date;
    std::optional<Date> drift_date;
    /// Written into an XML comment at the top of the document.
    std::vector<std::string> metadata;
};

/// Static SVG: grey daily bars, blue model curve, green NPI lines, red
/// death-threshold line, orange drift marker. Output is byte-stable.
std::string render_svg(const ChartInput& input);

}  // namespace driftlag::chart
