#include "proteograph/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "proteograph/error.hpp"

namespace proteograph::svg {

namespace {

constexpr double kMarginLeft = 62.0;
constexpr double kMarginRight = 14.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 40.0;
constexpr std::size_t kMaxLegendEntries = 12;
constexpr std::size_t kMaxPointsPerSeries = 2000;

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

std::string fixed(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
};

void render_panel(std::ostringstream& os, const Panel& panel, double ox, double oy, double w,
                  double h) {
    const double pw = w - kMarginLeft - kMarginRight;
    const double ph = h - kMarginTop - kMarginBottom;
    Range xr, yr;
    for (const auto& s : panel.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xr.include(s.x[i]);
            if (!panel.log_y || s.y[i] > 0.0) yr.include(s.y[i]);
        }
    }
    if (!xr.valid()) xr = Range{0.0, 1.0};
    if (!yr.valid()) yr = panel.log_y ? Range{1e-3, 1.0} : Range{0.0, 1.0};
    if (panel.log_y) {
        yr.lo = std::max(yr.lo, yr.hi * 1e-8);
        yr.lo = std::log10(yr.lo);
        yr.hi = std::log10(yr.hi);
    } else {
        yr.lo = std::min(yr.lo, 0.0);
    }
    if (xr.hi - xr.lo <= 0.0) xr.hi = xr.lo + 1.0;
    if (yr.hi - yr.lo <= 0.0) {
        const double pad = std::max(std::abs(yr.hi) * 0.05, 1e-12);
        yr.lo -= pad;
        yr.hi += pad;
    }
    auto px = [&](double x) { return ox + kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) {
        const double v = panel.log_y ? std::log10(std::max(y, std::pow(10.0, yr.lo))) : y;
        return oy + kMarginTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
    };

    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect x=\"" << fixed(ox + kMarginLeft) << "\" y=\"" << fixed(oy + kMarginTop)
       << "\" width=\"" << fixed(pw) << "\" height=\"" << fixed(ph)
       << "\" fill=\"white\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << fixed(ox + kMarginLeft + pw / 2) << "\" y=\"" << fixed(oy + 18)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.title) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
        const double tx = px(xv);
        const double ty = oy + kMarginTop + ph - ph * i / 4.0;
        os << "<line x1=\"" << fixed(tx) << "\" y1=\"" << fixed(oy + kMarginTop + ph) << "\" x2=\""
           << fixed(tx) << "\" y2=\"" << fixed(oy + kMarginTop + ph + 4) << "\" stroke=\"#444\"/>"
           << "<text x=\"" << fixed(tx) << "\" y=\"" << fixed(oy + kMarginTop + ph + 15)
           << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        os << "<line x1=\"" << fixed(ox + kMarginLeft - 4) << "\" y1=\"" << fixed(ty) << "\" x2=\""
           << fixed(ox + kMarginLeft) << "\" y2=\"" << fixed(ty) << "\" stroke=\"#444\"/>"
           << "<text x=\"" << fixed(ox + kMarginLeft - 6) << "\" y=\"" << fixed(ty + 4)
           << "\" text-anchor=\"end\">" << tick_label(panel.log_y ? std::pow(10.0, yv) : yv)
           << "</text>\n";
    }
    os << "<text x=\"" << fixed(ox + kMarginLeft + pw / 2) << "\" y=\"" << fixed(oy + h - 6)
       << "\" text-anchor=\"middle\">" << escape(panel.x_label) << "</text>\n";
    os << "<text transform=\"translate(" << fixed(ox + 12) << ',' << fixed(oy + kMarginTop + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << escape(panel.y_label)
       << (panel.log_y ? " (log)" : "") << "</text>\n";

    for (const auto& s : panel.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (n == 0) continue;
        const std::size_t stride = (n + kMaxPointsPerSeries - 1) / kMaxPointsPerSeries;
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << fixed(s.width, 1)
           << '"' << (s.dashed ? " stroke-dasharray=\"6,3\"" : "") << " points=\"";
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(s.y[i])) continue;
            os << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i])) << ' ';
        }
        if ((n - 1) % stride != 0 && std::isfinite(s.y[n - 1])) {
            os << fixed(px(s.x[n - 1])) << ',' << fixed(py(s.y[n - 1]));
        }
        os << "\"/>\n";
    }

    std::size_t entry = 0;
    for (const auto& s : panel.series) {
        if (!s.in_legend || entry >= kMaxLegendEntries) continue;
        const double ly = oy + kMarginTop + 10 + 13.0 * static_cast<double>(entry);
        const double lx = ox + kMarginLeft + pw - 96;
        os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 16)
           << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
           << (s.dashed ? " stroke-dasharray=\"6,3\"" : "") << "/>"
           << "<text x=\"" << fixed(lx + 20) << "\" y=\"" << fixed(ly + 4) << "\" font-size=\"10\">"
           << escape(s.name) << "</text>\n";
        ++entry;
    }
    os << "</g>\n";
}

}  // namespace

const char* palette(std::size_t i) {
    static const char* const colors[] = {"#1f77b4", "#d62728", "#ff7f0e", "#9467bd", "#2ca02c",
                                         "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

std::string render(const Figure& fig) {
    const std::size_t columns = std::max<std::size_t>(fig.columns, 1);
    const std::size_t rows = (fig.panels.size() + columns - 1) / columns;
    const double title_h = fig.title.empty() ? 0.0 : 26.0;
    const double width = fig.panel_width * static_cast<double>(columns);
    const double height = title_h + fig.panel_height * static_cast<double>(std::max<std::size_t>(rows, 1));
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
       << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0)
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";
    if (!fig.title.empty()) {
        os << "<text x=\"" << fixed(width / 2) << "\" y=\"18\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"15\">" << escape(fig.title) << "</text>\n";
    }
    for (std::size_t p = 0; p < fig.panels.size(); ++p) {
        const double ox = fig.panel_width * static_cast<double>(p % columns);
        const double oy = title_h + fig.panel_height * static_cast<double>(p / columns);
        render_panel(os, fig.panels[p], ox, oy, fig.panel_width, fig.panel_height);
    }
    os << "</svg>\n";
    return os.str();
}

void write(const Figure& figure, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << render(figure);
}

}  // namespace proteograph::svg
