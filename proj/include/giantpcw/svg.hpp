// minimal SVG line plot of a table: first column against the others
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "giantpcw/csv.hpp"

namespace giantpcw {

inline std::string svg_plot(const Table& t, const std::string& title) {
    const double W = 640, H = 400, ml = 70, mr = 150, mt = 30, mb = 45;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& r : t.rows) {
        if (!std::isfinite(r[0])) continue;
        x0 = std::min(x0, r[0]), x1 = std::max(x1, r[0]);
        for (std::size_t c = 1; c < r.size(); ++c)
            if (std::isfinite(r[c])) y0 = std::min(y0, r[c]), y1 = std::max(y1, r[c]);
    }
    if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
    if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
    auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
       << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"18\">" << title << "</text>\n";
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">"
       << t.columns[0] << "</text>\n";
    os << "<text x=\"" << ml << "\" y=\"" << H - mb + 14 << "\" text-anchor=\"middle\">"
       << format_number(x0).substr(0, 8) << "</text>\n";
    os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 14 << "\" text-anchor=\"middle\">"
       << format_number(x1).substr(0, 8) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << H - mb << "\" text-anchor=\"end\">"
       << format_number(y0).substr(0, 8) << "</text>\n";
    os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 8 << "\" text-anchor=\"end\">"
       << format_number(y1).substr(0, 8) << "</text>\n";
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        const char* col = colors[(c - 1) % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
        for (const auto& r : t.rows)
            if (std::isfinite(r[0]) && std::isfinite(r[c])) os << X(r[0]) << "," << Y(r[c]) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - mr + 8 << "\" y=\"" << mt + 14 * c << "\" fill=\"" << col << "\">"
           << t.columns[c] << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace giantpcw
