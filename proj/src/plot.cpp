#include "soqo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "soqo/errors.hpp"

namespace soqo {

namespace {

constexpr double kWidth = 860.0, kHeight = 520.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 42.0, kBottom = 56.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Series {
    std::string policy;
    std::vector<const ResultRow*> points;
};

}  // namespace

std::string emit_plot(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw EmptyInput("no result rows to plot");

    // Group by policy, keeping first-appearance order; rows within a policy
    // keep the caller's sweep order.
    std::vector<Series> series;
    for (const ResultRow& r : rows) {
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.policy == r.policy; });
        if (it == series.end()) {
            series.push_back({r.policy, {}});
            it = series.end() - 1;
        }
        it->points.push_back(&r);
    }

    double xmin = rows[0].sweep, xmax = rows[0].sweep;
    double ymin = rows[0].mean, ymax = rows[0].mean;
    for (const ResultRow& r : rows) {
        xmin = std::min(xmin, r.sweep);
        xmax = std::max(xmax, r.sweep);
        const double lo = 2.0 * r.mean - r.p95;  // mean-reflected upper tail
        ymin = std::min({ymin, lo, r.p95});
        ymax = std::max({ymax, r.p95, r.mean});
    }
    if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-300) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
           fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kLeft) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           rows[0].experiment + "</text>\n";

    // Axes with five ticks each.
    svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        svg += "<line x1=\"" + fmt(px(xv)) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(px(xv)) +
               "\" y2=\"" + fmt(kHeight - kBottom) + "\" stroke=\"#ddd\"/>\n";
        svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(yv)) + "\" x2=\"" +
               fmt(kWidth - kRight) + "\" y2=\"" + fmt(py(yv)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kHeight - kBottom + 16.0) +
               "\" text-anchor=\"middle\">" + fmt(xv) + "</text>\n";
        svg += "<text x=\"" + fmt(kLeft - 6.0) + "\" y=\"" + fmt(py(yv) + 4.0) +
               "\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(plot_w) +
           "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
        const auto& pts = series[s].points;

        // Band polygon: upper edge left-to-right, reflected edge back.
        std::string band;
        for (const ResultRow* r : pts)
            band += fmt(px(r->sweep)) + "," + fmt(py(r->p95)) + " ";
        for (auto it = pts.rbegin(); it != pts.rend(); ++it)
            band += fmt(px((*it)->sweep)) + "," + fmt(py(2.0 * (*it)->mean - (*it)->p95)) + " ";
        svg += "<polygon points=\"" + band + "\" fill=\"" + color +
               "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";

        std::string line;
        for (const ResultRow* r : pts) line += fmt(px(r->sweep)) + "," + fmt(py(r->mean)) + " ";
        svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.8\"/>\n";

        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(s);
        svg += "<line x1=\"" + fmt(kLeft + 10.0) + "\" y1=\"" + fmt(ly - 4.0) + "\" x2=\"" +
               fmt(kLeft + 34.0) + "\" y2=\"" + fmt(ly - 4.0) + "\" stroke=\"" + color +
               "\" stroke-width=\"1.8\"/>\n";
        svg += "<text x=\"" + fmt(kLeft + 40.0) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].policy +
               "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void write_plot_svg(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IOFailure("cannot open " + path + " for writing");
    out << emit_plot(rows);
    if (!out) throw IOFailure("failed writing " + path);
}

}  // namespace soqo
