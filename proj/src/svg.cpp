#include "pspec/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace pspec {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Rotating palette for contour levels, dark to light blue/red mix.
const char* kPalette[] = {"#b2182b", "#ef8a62", "#f4a582", "#92c5de",
                          "#4393c3", "#2166ac", "#762a83", "#1b7837"};

}  // namespace

void write_svg_plot(const std::string& path, const GridSpec& window,
                    const std::vector<Complex>& eigenvalues,
                    const ContourSet& contours,
                    const NumericalRangeBoundary* range,
                    const SvgOptions& opts) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write SVG file: " + path);

    const double margin = 50.0;
    const double pw = opts.width - 2 * margin;
    const double ph = opts.height - 2 * margin;
    auto px = [&](double x) {
        return margin + (x - window.re_min) / (window.re_max - window.re_min) * pw;
    };
    auto py = [&](double y) {
        return margin + (window.im_max - y) / (window.im_max - window.im_min) * ph;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
        << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width << " "
        << opts.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opts.title.empty())
        out << "<text x=\"" << opts.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"14\">" << opts.title << "</text>\n";

    // Frame and axis ticks.
    out << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\""
        << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const int nticks = 5;
    for (int k = 0; k < nticks; ++k) {
        const double x = window.re_min + (window.re_max - window.re_min) * k / (nticks - 1);
        const double y = window.im_min + (window.im_max - window.im_min) * k / (nticks - 1);
        out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(margin + ph) << "\" x2=\""
            << num(px(x)) << "\" y2=\"" << num(margin + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(margin + ph + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << num(x) << "</text>\n";
        out << "<line x1=\"" << num(margin - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\""
            << num(margin) << "\" y2=\"" << num(py(y)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(margin - 8) << "\" y=\"" << num(py(y) + 3)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
            << num(y) << "</text>\n";
    }
    // Zero axes when inside the window.
    if (window.re_min < 0 && window.re_max > 0)
        out << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(margin) << "\" x2=\""
            << num(px(0)) << "\" y2=\"" << num(margin + ph)
            << "\" stroke=\"#cccccc\" stroke-width=\"0.75\"/>\n";
    if (window.im_min < 0 && window.im_max > 0)
        out << "<line x1=\"" << num(margin) << "\" y1=\"" << num(py(0)) << "\" x2=\""
            << num(margin + pw) << "\" y2=\"" << num(py(0))
            << "\" stroke=\"#cccccc\" stroke-width=\"0.75\"/>\n";

    // Contours, one color per level, labeled by log10(eps).
    for (size_t li = 0; li < contours.levels.size(); ++li) {
        const ContourLevel& level = contours.levels[li];
        const char* color = kPalette[li % (sizeof(kPalette) / sizeof(kPalette[0]))];
        for (const Polyline& pl : level.polylines) {
            if (pl.vertices.size() < 2) continue;
            out << "<path d=\"M";
            for (size_t i = 0; i < pl.vertices.size(); ++i)
                out << (i ? " L" : " ") << num(px(pl.vertices[i].real())) << " "
                    << num(py(pl.vertices[i].imag()));
            if (pl.closed) out << " Z";
            out << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.25\"/>\n";
        }
        out << "<text x=\"" << num(margin + pw - 6) << "\" y=\""
            << num(margin + 14 + 13 * double(li)) << "\" text-anchor=\"end\" "
            << "font-family=\"sans-serif\" font-size=\"10\" fill=\"" << color
            << "\">log10(eps) = " << num(std::log10(level.epsilon)) << "</text>\n";
    }

    // Numerical range boundary as a dashed closed curve.
    if (range && range->points.size() > 2) {
        out << "<path d=\"M";
        for (size_t i = 0; i < range->points.size(); ++i)
            out << (i ? " L" : " ") << num(px(range->points[i].real())) << " "
                << num(py(range->points[i].imag()));
        out << " Z\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\" "
            << "stroke-dasharray=\"5,4\"/>\n";
    }

    // Eigenvalue crosses.
    for (const Complex l : eigenvalues) {
        if (l.real() < window.re_min || l.real() > window.re_max ||
            l.imag() < window.im_min || l.imag() > window.im_max)
            continue;
        const double cx = px(l.real()), cy = py(l.imag());
        out << "<path d=\"M " << num(cx - 4) << " " << num(cy) << " L " << num(cx + 4)
            << " " << num(cy) << " M " << num(cx) << " " << num(cy - 4) << " L "
            << num(cx) << " " << num(cy + 4)
            << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }

    out << "</svg>\n";
}

}  // namespace pspec
