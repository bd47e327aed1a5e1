#include "dml/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dml {

namespace {

constexpr double W = 900, H = 600;
constexpr double ML = 70, MR = 20, MT = 40, MB = 50;  // margins

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string SvgPlot::render() const {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series) {
        for (double v : s.x) { xlo = std::min(xlo, v); xhi = std::max(xhi, v); }
        for (double v : s.y) { ylo = std::min(ylo, v); yhi = std::max(yhi, v); }
    }
    for (const auto& m : markers) {
        xlo = std::min(xlo, m.x); xhi = std::max(xhi, m.x);
        ylo = std::min(ylo, m.y); yhi = std::max(yhi, m.y);
    }
    if (!std::isfinite(xlo) || !std::isfinite(ylo))
        throw std::invalid_argument("nothing to plot");
    if (xhi - xlo < 1e-300) { xhi += 1.0; xlo -= 1.0; }
    if (yhi - ylo < 1e-300) { yhi += 1.0; ylo -= 1.0; }
    const double xpad = 0.03 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
    xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

    auto px = [&](double v) { return ML + (v - xlo) / (xhi - xlo) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ylo) / (yhi - ylo) * (H - MT - MB); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
       << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H
       << "\" fill=\"white\"/>\n";
    if (!title.empty())
        os << "<text x=\"" << W / 2
           << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
              "font-family=\"sans-serif\">"
           << esc(title) << "</text>\n";

    // axes with 6 ticks per side
    os << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
    os << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR
       << "\" height=\"" << H - MT - MB << "\"/>\n";
    os << "</g>\n<g id=\"ticks\" font-size=\"11\" font-family=\"sans-serif\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double vx = xlo + (xhi - xlo) * i / 5;
        const double vy = ylo + (yhi - ylo) * i / 5;
        os << "<text x=\"" << num(px(vx)) << "\" y=\"" << H - MB + 16
           << "\" text-anchor=\"middle\">" << num(vx) << "</text>\n";
        os << "<text x=\"" << ML - 6 << "\" y=\"" << num(py(vy) + 4)
           << "\" text-anchor=\"end\">" << num(vy) << "</text>\n";
    }
    if (!x_label.empty())
        os << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
           << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
    if (!y_label.empty())
        os << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
           << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
           << (MT + H - MB) / 2 << ")\">" << esc(y_label) << "</text>\n";
    os << "</g>\n";

    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series x/y length mismatch");
        os << "<g id=\"" << esc(s.id) << "\" fill=\"none\" stroke=\""
           << s.color << "\" stroke-width=\"1.3\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << ">\n<polyline points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) os << ' ';
            os << num(px(s.x[i])) << ',' << num(py(s.y[i]));
        }
        os << "\"/>\n</g>\n";
    }

    for (const auto& m : markers) {
        os << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y))
           << "\" r=\"4\" fill=\"" << m.color << "\"/>\n";
        if (!m.label.empty())
            os << "<text x=\"" << num(px(m.x) + 6) << "\" y=\""
               << num(py(m.y) - 6)
               << "\" font-size=\"11\" font-family=\"sans-serif\">"
               << esc(m.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void SvgPlot::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << render();
}

}  // namespace dml
