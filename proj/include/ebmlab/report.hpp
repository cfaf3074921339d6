#pragma once

#include <string>
#include <vector>

namespace ebmlab {

/// One curve of a log-log plot. Points with non-positive coordinates are
/// dropped (they have no place on a log axis).
struct PlotSeries {
    std::string label;
    std::string color;  // empty -> next palette color
    bool dashed = false;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG log-log plot with decade grid lines and a legend. Output bytes
/// are a pure function of the inputs (fixed formatting, no timestamps).
void write_loglog_svg(const std::string& filename, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

/// Linear-axes variant of write_loglog_svg for signed data (sample paths,
/// iterates); same deterministic-output guarantee.
void write_line_svg(const std::string& filename, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

/// Numeric CSV table; values printed with 17 significant digits so reading
/// the file back reproduces the doubles exactly.
void write_table_csv(const std::string& filename, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

}  // namespace ebmlab
