#ifndef CAVITYSPEC_EMIT_HPP
#define CAVITYSPEC_EMIT_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cavityspec::emit {

// 12 significant digits: below every tolerance in the project, above
// double-precision noise.
std::string fmt_g(double v);

// the same rounding applied to the value itself, so JSON output and its
// re-parse agree bit-for-bit
double round12(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const;
};

// Minimal static line plot, fixed 800x600 viewport.
struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dotted = false;
    std::string label;
};

struct SvgPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<SvgSeries> series;

    // horizontal reference lines drawn dotted across the frame
    std::vector<double> hlines;

    void write(std::ostream& os) const;
};

} // namespace cavityspec::emit

#endif
