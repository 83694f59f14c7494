// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "wpbn/experiment.hpp"

namespace wpbn {

namespace {

struct SeriesPoint {
    double x;
    double y;
    double ci;
};

struct Series {
    std::string label;
    bool simulated = false;
    std::vector<SeriesPoint> points;
};

const char* kPalette[] = {"#1f6fb2", "#d1495b", "#2e8b57", "#8d5ab9",
                          "#c97b1e", "#3b3b3b", "#0fa3a3", "#a0529f"};

bool token_is_simulated(const std::string& token)
{
    return power_model_from_string(token).has_value() || token == "np_nearest" ||
           token == "all_pbs";
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Round the raw span to visually pleasant tick positions.
std::vector<double> ticks(double lo, double hi, int target)
{
    const double span = hi - lo;
    const double raw = span / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return out;
}

} // namespace

std::string to_svg(const SweepResult& result, const std::string& metric)
{
    const bool capacity = metric == "capacity";

    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : result.rows) {
        if (row.status != "ok") {
            continue;
        }
        auto [it, inserted] = index.try_emplace(row.method, series.size());
        if (inserted) {
            series.push_back(Series{row.method, token_is_simulated(row.method), {}});
        }
        const double y = capacity ? row.capacity : row.metric;
        const double ci = capacity ? row.capacity_ci : row.metric_ci;
        series[it->second].points.push_back({row.value, y, ci});
    }
    if (series.empty()) {
        throw SpecError("experiment '" + result.spec.name + "' has no plottable rows");
    }

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y - p.ci);
            yhi = std::max(yhi, p.y + p.ci);
        }
    }
    if (xhi <= xlo) {
        xhi = xlo + 1.0;
    }
    const double ypad = std::max(0.05 * (yhi - ylo), 1e-12);
    ylo -= ypad;
    yhi += ypad;
    if (metric == "coverage") {
        ylo = std::max(0.0, ylo);
        yhi = std::min(1.02, std::max(yhi, 0.1));
    }
    if (ylo >= yhi) {
        yhi = ylo + 1.0;
    }

    constexpr double W = 720, H = 480, ML = 70, MR = 24, MT = 40, MB = 56;
    const double PW = W - ML - MR, PH = H - MT - MB;
    const auto X = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * PW; };
    const auto Y = [&](double y) { return MT + PH - (y - ylo) / (yhi - ylo) * PH; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">"
        << result.spec.name << " - " << metric << "</text>\n";

    // Axes, grid, tick labels.
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : ticks(xlo, xhi, 7)) {
        const double px = X(t);
        svg << "<line x1=\"" << px << "\" y1=\"" << MT << "\" x2=\"" << px << "\" y2=\""
            << MT + PH << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << MT + PH + 16
            << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t : ticks(ylo, yhi, 6)) {
        const double py = Y(t);
        svg << "<line x1=\"" << ML << "\" y1=\"" << py << "\" x2=\"" << ML + PW << "\" y2=\""
            << py << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << ML - 6 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    svg << "<text x=\"" << ML + PW / 2 << "\" y=\"" << H - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">" << result.spec.sweep_parameter
        << "</text>\n"
        << "<text x=\"18\" y=\"" << MT + PH / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << MT + PH / 2 << ")\">" << metric << "</text>\n"
        << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << PW << "\" height=\"" << PH
        << "\" fill=\"none\" stroke=\"#555\"/>\n</g>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        auto& s = series[i];
        std::sort(s.points.begin(), s.points.end(),
                  [](const SeriesPoint& a, const SeriesPoint& b) { return a.x < b.x; });
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];

        if (s.simulated && s.points.size() > 1) {
            // Confidence band.
            std::ostringstream band;
            for (const auto& p : s.points) {
                band << X(p.x) << "," << Y(p.y + p.ci) << " ";
            }
            for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
                band << X(it->x) << "," << Y(it->y - it->ci) << " ";
            }
            svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
                << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }

        std::ostringstream line;
        for (const auto& p : s.points) {
            line << X(p.x) << "," << Y(p.y) << " ";
        }
        svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"" << (s.simulated ? " stroke-dasharray=\"6 4\"" : "")
            << "/>\n";
        if (s.simulated) {
            for (const auto& p : s.points) {
                svg << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y)
                    << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
            }
        }
    }

    // Legend.
    const double lx = ML + 12, ly = MT + 10;
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect x=\"" << lx - 6 << "\" y=\"" << ly - 14 << "\" width=\"250\" height=\""
        << 18 * series.size() + 10 << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#bbb\"/>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double y = ly + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << lx << "\" y1=\"" << y - 4 << "\" x2=\"" << lx + 26 << "\" y2=\""
            << y - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\""
            << (series[i].simulated ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
            << "<text x=\"" << lx + 32 << "\" y=\"" << y << "\">" << series[i].label
            << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

void write_svg(const SweepResult& result, const std::string& metric, const std::string& path)
{
    const std::string body = to_svg(result, metric);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << body;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace wpbn
