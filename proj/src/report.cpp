#include "ebmlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ebmlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

// Power-of-ten tick label: 1e-3, 1, 100, ...
std::string decade_label(int exponent) {
    if (exponent >= -2 && exponent <= 3) return fmt("%g", std::pow(10.0, exponent));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "1e%d", exponent);
    return buf;
}

}  // namespace

void write_loglog_svg(const std::string& filename, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
    const double width = 720, height = 480;
    const double left = 70, right = 160, top = 40, bottom = 50;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double lx_min = std::numeric_limits<double>::infinity(), lx_max = -lx_min;
    double ly_min = lx_min, ly_max = -lx_min;
    for (const auto& s : series) {
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
            lx_min = std::min(lx_min, std::log10(s.x[k]));
            lx_max = std::max(lx_max, std::log10(s.x[k]));
            ly_min = std::min(ly_min, std::log10(s.y[k]));
            ly_max = std::max(ly_max, std::log10(s.y[k]));
        }
    }
    const bool empty = !(lx_min <= lx_max);
    if (empty) { lx_min = 0; lx_max = 1; ly_min = 0; ly_max = 1; }
    if (lx_max - lx_min < 1e-9) { lx_min -= 0.5; lx_max += 0.5; }
    if (ly_max - ly_min < 1e-9) { ly_min -= 0.5; ly_max += 0.5; }
    // breathing room so curves do not touch the frame
    double pad_x = 0.04 * (lx_max - lx_min), pad_y = 0.06 * (ly_max - ly_min);
    lx_min -= pad_x; lx_max += pad_x; ly_min -= pad_y; ly_max += pad_y;

    auto px = [&](double lx) { return left + (lx - lx_min) / (lx_max - lx_min) * plot_w; };
    auto py = [&](double ly) { return top + (ly_max - ly) / (ly_max - ly_min) * plot_h; };

    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
        << " text-anchor=\"middle\">" << title << "</text>\n";

    // decade grid
    for (int e = static_cast<int>(std::ceil(lx_min)); e <= static_cast<int>(std::floor(lx_max));
         ++e) {
        double x = px(e);
        out << "<line x1=\"" << fmt("%.2f", x) << "\" y1=\"" << fmt("%.2f", top) << "\" x2=\""
            << fmt("%.2f", x) << "\" y2=\"" << fmt("%.2f", top + plot_h)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", top + plot_h + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << decade_label(e) << "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ly_min)); e <= static_cast<int>(std::floor(ly_max));
         ++e) {
        double y = py(e);
        out << "<line x1=\"" << fmt("%.2f", left) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
            << fmt("%.2f", left + plot_w) << "\" y2=\"" << fmt("%.2f", y)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt("%.2f", left - 6) << "\" y=\"" << fmt("%.2f", y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << decade_label(e) << "</text>\n";
    }
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">" << y_label << "</text>\n";

    int color_idx = 0;
    double legend_y = top + 10;
    for (const auto& s : series) {
        std::string color = s.color.empty() ? kPalette[color_idx++ % kPaletteSize] : s.color;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!(s.x[k] > 0.0) || !(s.y[k] > 0.0)) continue;
            out << fmt("%.2f", px(std::log10(s.x[k]))) << ","
                << fmt("%.2f", py(std::log10(s.y[k]))) << " ";
        }
        out << "\"/>\n";
        out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << fmt("%.2f", legend_y)
            << "\" x2=\"" << left + plot_w + 34 << "\" y2=\"" << fmt("%.2f", legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        out << "<text x=\"" << left + plot_w + 40 << "\" y=\"" << fmt("%.2f", legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
}

void write_line_svg(const std::string& filename, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    const double width = 720, height = 480;
    const double left = 70, right = 160, top = 40, bottom = 50;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            x_min = std::min(x_min, s.x[k]);
            x_max = std::max(x_max, s.x[k]);
            y_min = std::min(y_min, s.y[k]);
            y_max = std::max(y_max, s.y[k]);
        }
    }
    if (!(x_min <= x_max)) { x_min = 0; x_max = 1; y_min = 0; y_max = 1; }
    if (x_max - x_min < 1e-300) { x_min -= 0.5; x_max += 0.5; }
    if (y_max - y_min < 1e-300) { y_min -= 0.5; y_max += 0.5; }
    double pad_x = 0.04 * (x_max - x_min), pad_y = 0.06 * (y_max - y_min);
    x_min -= pad_x; x_max += pad_x; y_min -= pad_y; y_max += pad_y;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
        << " text-anchor=\"middle\">" << title << "</text>\n";

    const int n_ticks = 5;
    for (int k = 0; k <= n_ticks; ++k) {
        double fx = x_min + (x_max - x_min) * k / n_ticks;
        double x = px(fx);
        out << "<line x1=\"" << fmt("%.2f", x) << "\" y1=\"" << fmt("%.2f", top) << "\" x2=\""
            << fmt("%.2f", x) << "\" y2=\"" << fmt("%.2f", top + plot_h)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", top + plot_h + 18)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << fmt("%.3g", fx) << "</text>\n";
        double fy = y_min + (y_max - y_min) * k / n_ticks;
        double y = py(fy);
        out << "<line x1=\"" << fmt("%.2f", left) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
            << fmt("%.2f", left + plot_w) << "\" y2=\"" << fmt("%.2f", y)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt("%.2f", left - 6) << "\" y=\"" << fmt("%.2f", y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt("%.3g", fy) << "</text>\n";
    }
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">" << y_label << "</text>\n";

    int color_idx = 0;
    double legend_y = top + 10;
    for (const auto& s : series) {
        std::string color = s.color.empty() ? kPalette[color_idx++ % kPaletteSize] : s.color;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            out << fmt("%.2f", px(s.x[k])) << "," << fmt("%.2f", py(s.y[k])) << " ";
        }
        out << "\"/>\n";
        out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << fmt("%.2f", legend_y)
            << "\" x2=\"" << left + plot_w + 34 << "\" y2=\"" << fmt("%.2f", legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        out << "<text x=\"" << left + plot_w + 40 << "\" y=\"" << fmt("%.2f", legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
}

void write_table_csv(const std::string& filename, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename);
    for (size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    char buf[64];
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("write_table_csv: row width mismatch");
        for (size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace ebmlab
