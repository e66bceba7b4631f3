#include "driftlag/chart.hpp"

#include <algorithm>
#include <cstdio>
#include <string_view>

namespace driftlag::chart {

namespace {

constexpr double kWidth = 960;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 30;
constexpr double kTop = 50;
constexpr double kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string comment_safe(std::string_view s) {
    std::string out(s);
    for (std::size_t pos; (pos = out.find("--")) != std::string::npos;) out.replace(pos, 2, "- -");
    return out;
}

std::string label_for(InterventionKind kind) {
    switch (kind) {
        case InterventionKind::GatheringRestriction: return "gathering";
        case InterventionKind::SocialDistancing: return "social distancing";
        case InterventionKind::SchoolClosure: return "schools";
        case InterventionKind::Lockdown: return "lockdown";
        case InterventionKind::MaskWearing: return "masks";
    }
    return "npi";
}

}  // namespace

std::string render_svg(const ChartInput& in) {
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!in.metadata.empty()) {
        svg += "<!--\n";
        for (const auto& line : in.metadata) svg += comment_safe(line) + "\n";
        svg += "-->\n";
    }
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + xml_escape(in.title) +
           "</text>\n";

    const auto& a = in.actuals;
    if (a.values.empty()) {
        svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight / 2) +
               "\" text-anchor=\"middle\" fill=\"#b00000\">no case data</text>\n</svg>\n";
        return svg;
    }

    const Date first = a.start_date;
    const Date last = a.end_date();
    const double days = static_cast<double>(last - first + 1);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double bar_w = plot_w / days;

    double y_max = *std::max_element(a.values.begin(), a.values.end());
    y_max = std::max(y_max * 1.15, 1.0);  // forecasts above this are clipped to the frame

    auto x_of = [&](Date d) { return kLeft + (static_cast<double>(d - first) + 0.5) * bar_w; };
    auto y_of = [&](double v) { return kTop + plot_h - std::clamp(v / y_max, 0.0, 1.0) * plot_h; };

    // axes and ticks
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" + num(kLeft + plot_w) + "\" y2=\"" +
           num(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(kTop + plot_h) + "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = y_max * k / 4.0;
        svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y_of(v) + 4) + "\" text-anchor=\"end\">" +
               std::to_string(static_cast<long long>(v + 0.5)) + "</text>\n";
    }
    for (Date d = first; d <= last; d = d + 7) {
        svg += "<text x=\"" + num(x_of(d)) + "\" y=\"" + num(kTop + plot_h + 16) + "\" text-anchor=\"middle\">" +
               d.iso().substr(5) + "</text>\n";
    }

    svg += "<g fill=\"#a0a0a0\">\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double top = y_of(a.values[i]);
        svg += "<rect x=\"" + num(kLeft + static_cast<double>(i) * bar_w + bar_w * 0.1) + "\" y=\"" + num(top) +
               "\" width=\"" + num(bar_w * 0.8) + "\" height=\"" + num(kTop + plot_h - top) + "\"/>\n";
    }
    svg += "</g>\n";

    if (in.model.values.empty()) {
        svg += "<text x=\"" + num(kLeft + 10) + "\" y=\"" + num(kTop + 14) +
               "\" fill=\"#b00000\">warning: no forecast available</text>\n";
    } else {
        svg += "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"2\" points=\"";
        bool first_point = true;
        for (std::size_t i = 0; i < in.model.values.size(); ++i) {
            const Date d = in.model.start_date + static_cast<int>(i);
            if (d < first || d > last) continue;
            if (!first_point) svg += " ";
            svg += num(x_of(d)) + "," + num(y_of(in.model.values[i]));
            first_point = false;
        }
        svg += "\"/>\n";
    }

    auto vline = [&](Date d, const std::string& colour, const std::string& label, int slot, bool dashed) {
        if (d < first || d > last) return;
        const double x = x_of(d);
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) + "\" y2=\"" + num(kTop + plot_h) +
               "\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" + (dashed ? " stroke-dasharray=\"6,3\"" : "") + "/>\n";
        svg += "<text x=\"" + num(x + 3) + "\" y=\"" + num(kTop + 12 + 12 * slot) + "\" fill=\"" + colour + "\">" +
               xml_escape(label) + "</text>\n";
    };

    auto events = in.events;
    std::sort(events.begin(), events.end(), [](const auto& l, const auto& r) {
        return l.date != r.date ? l.date < r.date : l.kind < r.kind;
    });
    int slot = 0;
    for (const auto& e : events) vline(e.date, "#2e8b2e", label_for(e.kind) + " " + e.date.iso().substr(5), slot++ % 6, false);
    if (in.threshold_date) vline(*in.threshold_date, "#d00000", "1 death/1M " + in.threshold_date->iso().substr(5), 6, false);
    if (in.drift_date) {
        vline(*in.drift_date, "#e07000", "drift " + in.drift_date->iso(), 7, true);
        const auto idx = static_cast<std::size_t>(*in.drift_date - first);
        if (*in.drift_date >= first && idx < a.size()) {
            svg += "<circle cx=\"" + num(x_of(*in.drift_date)) + "\" cy=\"" + num(y_of(a.values[idx])) +
                   "\" r=\"5\" fill=\"#e07000\"/>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace driftlag::chart
