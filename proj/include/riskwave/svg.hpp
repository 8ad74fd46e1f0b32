// svg.hpp -- tiny deterministic SVG charts (KM step plot, ROC polyline)
#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "riskwave/common.hpp"

namespace riskwave {
namespace svg {

struct Chart {
    int width = 640;
    int height = 480;
    double margin = 56.0;
    std::string title;
    std::string x_label;
    std::string y_label;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

inline void open_chart(std::string& out, const Chart& c, double x_min, double x_max) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(c.width) +
           "\" height=\"" + std::to_string(c.height) + "\" viewBox=\"0 0 " +
           std::to_string(c.width) + " " + std::to_string(c.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double x0 = c.margin, y0 = c.height - c.margin;
    const double x1 = c.width - c.margin, y1 = c.margin;
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
           num(y0) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
           num(y1) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + c.title + "</text>\n";
    out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(c.height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + c.x_label +
           "</text>\n";
    out += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 " + num((y0 + y1) / 2) + ")\">" + c.y_label + "</text>\n";
    // axis extent labels; y is always [0,1]
    out += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + 16.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + num(x_min) + "</text>\n";
    out += "<text x=\"" + num(x1) + "\" y=\"" + num(y0 + 16.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(x_max) +
           "</text>\n";
    out += "<text x=\"" + num(x0 - 6.0) + "\" y=\"" + num(y0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
    out += "<text x=\"" + num(x0 - 6.0) + "\" y=\"" + num(y1 + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";
}

} // namespace detail

/// Right-continuous step plot of (x, y) with y in [0,1]; used for the
/// Kaplan-Meier CDF. Starts at (0, 0).
inline std::string step_plot(const std::vector<double>& x, const std::vector<double>& y,
                             const Chart& chart) {
    riskwave::detail::require(x.size() == y.size() && !x.empty(), "step_plot: bad input");
    const double x_max = x.back() > 0 ? x.back() : 1.0;
    std::string out;
    detail::open_chart(out, chart, 0.0, x_max);
    const double px0 = chart.margin, py0 = chart.height - chart.margin;
    const double w = chart.width - 2 * chart.margin, h = chart.height - 2 * chart.margin;
    auto X = [&](double v) { return px0 + w * (v / x_max); };
    auto Y = [&](double v) { return py0 - h * v; };
    std::string path = "M " + detail::num(X(0)) + " " + detail::num(Y(0));
    double cur = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        path += " L " + detail::num(X(x[i])) + " " + detail::num(Y(cur));
        cur = y[i];
        path += " L " + detail::num(X(x[i])) + " " + detail::num(Y(cur));
    }
    path += " L " + detail::num(X(x_max)) + " " + detail::num(Y(cur));
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
    out += "</svg>\n";
    return out;
}

/// Polyline of (x, y) points in the unit square; used for ROC curves. Draws
/// the chance diagonal for reference.
inline std::string line_plot(const std::vector<double>& x, const std::vector<double>& y,
                             const Chart& chart) {
    riskwave::detail::require(x.size() == y.size() && !x.empty(), "line_plot: bad input");
    std::string out;
    detail::open_chart(out, chart, 0.0, 1.0);
    const double px0 = chart.margin, py0 = chart.height - chart.margin;
    const double w = chart.width - 2 * chart.margin, h = chart.height - 2 * chart.margin;
    auto X = [&](double v) { return px0 + w * v; };
    auto Y = [&](double v) { return py0 - h * v; };
    out += "<line x1=\"" + detail::num(X(0)) + "\" y1=\"" + detail::num(Y(0)) + "\" x2=\"" +
           detail::num(X(1)) + "\" y2=\"" + detail::num(Y(1)) +
           "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
    std::string path;
    for (std::size_t i = 0; i < x.size(); ++i)
        path += (i ? " L " : "M ") + detail::num(X(x[i])) + " " + detail::num(Y(y[i]));
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#2c6fbb\" stroke-width=\"1.5\"/>\n";
    out += "</svg>\n";
    return out;
}

} // namespace svg
} // namespace riskwave
