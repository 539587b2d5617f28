#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ehpc/harness.hpp"

namespace ehpc {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_figure_svg(const FigureResult& fig) {
    const double W = 760, H = 520;
    const double ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double xmax = 1.0, ymin = 1e300, ymax = -1e300;
    for (const auto& c : fig.curves) {
        for (const auto& r : c.rows) {
            xmax = std::max(xmax, static_cast<double>(r.slot));
            ymin = std::min(ymin, r.mean_avg_utility);
            ymax = std::max(ymax, r.mean_avg_utility);
        }
    }
    if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
    double pad = 0.05 * std::max(ymax - ymin, 1e-9);
    ymin -= pad;
    ymax += pad;

    auto X = [&](double t) { return ml + pw * t / xmax; };
    auto Y = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" << fig.title << "</text>\n";
    // axes
    s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double t = xmax * i / 5.0;
        double v = ymin + (ymax - ymin) * i / 5.0;
        s << "<line x1=\"" << X(t) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(t) << "\" y2=\""
          << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << X(t) << "\" y=\"" << mt + ph + 20
          << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
          << fmt(t) << "</text>\n";
        s << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(v) << "\" x2=\"" << ml << "\" y2=\""
          << Y(v) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << ml - 9 << "\" y=\"" << Y(v) + 4
          << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
          << fmt(v) << "</text>\n";
    }
    s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">slot</text>\n";
    s << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 16 " << mt + ph / 2
      << ")\">running average utility</text>\n";

    for (std::size_t ci = 0; ci < fig.curves.size(); ++ci) {
        const auto& c = fig.curves[ci];
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : c.rows)
            s << fmt(X(static_cast<double>(r.slot))) << "," << fmt(Y(r.mean_avg_utility)) << " ";
        s << "\"/>\n";
        double ly = mt + 18 + 18 * static_cast<double>(ci);
        s << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 120
          << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << ml + pw - 114 << "\" y=\"" << ly + 4
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << c.label << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace ehpc
