#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "co2cast/report.hpp"

namespace co2cast {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr int kTicks = 5;

struct Axis {
    double lo;
    double hi;
    double px_lo;
    double px_hi;

    double map(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

Axis make_axis(double lo, double hi, double px_lo, double px_hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    return {lo, hi, px_lo, px_hi};
}

std::string points_attr(const std::vector<std::pair<double, double>>& pts) {
    std::string out;
    for (const auto& [x, y] : pts) {
        if (!out.empty()) out += ' ';
        out += fmt::format("{:.2f},{:.2f}", x, y);
    }
    return out;
}

std::string tick_label(double v) { return fmt::format("{:.6g}", v); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const AnnualSeries& history, const ForecastPath* forecast) {
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    auto extend = [&](double v) {
        if (!std::isfinite(v)) return;
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    };
    for (double v : history.values) extend(v);
    int first_year = history.start_year;
    int last_year = history.size() ? history.end_year() : history.start_year;
    if (forecast && !forecast->points.empty()) {
        for (std::size_t i = 0; i < forecast->points.size(); ++i) {
            extend(forecast->points[i]);
            extend(forecast->lower[i]);
            extend(forecast->upper[i]);
        }
        last_year = forecast->start_year + static_cast<int>(forecast->points.size()) - 1;
    }
    if (!std::isfinite(ymin)) ymin = ymax = 0.0;

    const Axis xa = make_axis(first_year, last_year, kLeft, kWidth - kRight);
    const Axis ya = make_axis(ymin, ymax, kHeight - kBottom, kTop);

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n", kWidth,
        kHeight);
    s += fmt::format("<title>{} CO2 emissions (Mt)</title>\n", escape(history.country));
    s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);

    // Axes and ticks.
    s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", kLeft, kHeight - kBottom,
                     kWidth - kRight, kHeight - kBottom);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", kLeft, kTop, kLeft,
                     kHeight - kBottom);
    for (int i = 0; i < kTicks; ++i) {
        const double xv = xa.lo + (xa.hi - xa.lo) * i / (kTicks - 1);
        const double px = xa.map(xv);
        s += fmt::format("<line class=\"xtick\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n", px,
                         kHeight - kBottom, kHeight - kBottom + 5);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" stroke=\"none\">{}</text>\n", px,
                         kHeight - kBottom + 20, tick_label(xv));
        const double yv = ya.lo + (ya.hi - ya.lo) * i / (kTicks - 1);
        const double py = ya.map(yv);
        s += fmt::format("<line class=\"ytick\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n",
                         kLeft - 5, py, kLeft);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" stroke=\"none\">{}</text>\n",
                         kLeft - 8, py + 4, tick_label(yv));
    }
    s += "</g>\n";

    if (forecast && !forecast->points.empty()) {
        std::vector<std::pair<double, double>> band;
        for (std::size_t i = 0; i < forecast->points.size(); ++i) {
            band.emplace_back(xa.map(forecast->start_year + static_cast<double>(i)), ya.map(forecast->upper[i]));
        }
        for (std::size_t i = forecast->points.size(); i-- > 0;) {
            band.emplace_back(xa.map(forecast->start_year + static_cast<double>(i)), ya.map(forecast->lower[i]));
        }
        s += fmt::format(
            "<polygon class=\"interval\" points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\"/>\n",
            points_attr(band));
    }

    std::vector<std::pair<double, double>> hist;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (std::isfinite(history.values[i])) {
            hist.emplace_back(xa.map(history.year_at(i)), ya.map(history.values[i]));
        }
    }
    s += fmt::format("<polyline class=\"history\" points=\"{}\" fill=\"none\" stroke=\"#08306b\" stroke-width=\"2\"/>\n",
                     points_attr(hist));

    if (forecast && !forecast->points.empty()) {
        std::vector<std::pair<double, double>> fc;
        if (!hist.empty()) fc.push_back(hist.back());
        for (std::size_t i = 0; i < forecast->points.size(); ++i) {
            fc.emplace_back(xa.map(forecast->start_year + static_cast<double>(i)), ya.map(forecast->points[i]));
        }
        s += fmt::format(
            "<polyline class=\"forecast\" points=\"{}\" fill=\"none\" stroke=\"#d94801\" stroke-width=\"2\" "
            "stroke-dasharray=\"6 3\"/>\n",
            points_attr(fc));
    }

    if (history.size()) {
        const double bx = xa.map(history.end_year());
        s += fmt::format(
            "<line class=\"boundary\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"gray\" "
            "stroke-dasharray=\"4 4\"/>\n",
            bx, kTop, kHeight - kBottom);
    }
    s += "</svg>\n";
    return s;
}

}  // namespace co2cast
