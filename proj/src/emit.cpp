#include "cavityspec/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace cavityspec::emit {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    return std::strtod(fmt_g(v).c_str(), nullptr);
}

void CsvTable::write(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
}

namespace {

constexpr double W = 800.0, H = 600.0;
constexpr double ML = 70.0, MR = 20.0, MT = 40.0, MB = 50.0;

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

void SvgPlot::write(std::ostream& os) const {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    for (double h : hlines) {
        ylo = std::min(ylo, h);
        yhi = std::max(yhi, h);
    }
    if (!std::isfinite(xlo) || xlo == xhi) {
        xlo = 0.0;
        xhi = 1.0;
    }
    if (!std::isfinite(ylo) || ylo == yhi) {
        ylo = 0.0;
        yhi = 1.0;
    }
    double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    auto px = [&](double v) { return ML + (v - xlo) / (xhi - xlo) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ylo) / (yhi - ylo) * (H - MT - MB); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
          "height=\"600\" viewBox=\"0 0 800 600\">\n"
       << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
       << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
       << "\" height=\"" << H - MT - MB
       << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // ticks: 6 per axis
    for (int i = 0; i <= 5; ++i) {
        double fx = xlo + i * (xhi - xlo) / 5.0;
        double fy = ylo + i * (yhi - ylo) / 5.0;
        os << "<line x1=\"" << px(fx) << "\" y1=\"" << H - MB << "\" x2=\""
           << px(fx) << "\" y2=\"" << H - MB + 5 << "\" stroke=\"#444\"/>\n"
           << "<text x=\"" << px(fx) << "\" y=\"" << H - MB + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx)
           << "</text>\n"
           << "<line x1=\"" << ML - 5 << "\" y1=\"" << py(fy) << "\" x2=\""
           << ML << "\" y2=\"" << py(fy) << "\" stroke=\"#444\"/>\n"
           << "<text x=\"" << ML - 8 << "\" y=\"" << py(fy) + 4
           << "\" font-size=\"11\" text-anchor=\"end\">" << tick_label(fy)
           << "</text>\n";
    }

    for (double h : hlines)
        os << "<line x1=\"" << ML << "\" y1=\"" << py(h) << "\" x2=\""
           << W - MR << "\" y2=\"" << py(h)
           << "\" stroke=\"#888\" stroke-dasharray=\"2,4\"/>\n";

    int li = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
        if (s.dotted)
            os << " stroke-dasharray=\"2,4\"";
        os << " stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            os << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        os << "\"/>\n";
        if (!s.label.empty()) {
            os << "<text x=\"" << W - MR - 8 << "\" y=\"" << MT + 16 + 14 * li
               << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << s.color
               << "\">" << s.label << "</text>\n";
            ++li;
        }
    }

    if (!title.empty())
        os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << MT - 14
           << "\" font-size=\"15\" text-anchor=\"middle\">" << title
           << "</text>\n";
    if (!xlabel.empty())
        os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
           << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
           << "</text>\n";
    if (!ylabel.empty())
        os << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
           << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
              "16 "
           << (MT + H - MB) / 2 << ")\">" << ylabel << "</text>\n";

    os << "</svg>\n";
}

} // namespace cavityspec::emit
