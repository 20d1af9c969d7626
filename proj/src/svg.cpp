#include "qcarpet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace qcarpet {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void open_svg(std::ostringstream& out, double w, double h, bool timestamp) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
    if (timestamp) {
        std::time_t t = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        out << "<!-- generated " << buf << " -->\n";
    }
}

// simple gray-to-hot color ramp for heatmaps
std::string ramp(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(40 + 215 * t);
    const int g = static_cast<int>(40 + 120 * (1 - std::abs(2 * t - 1)));
    const int b = static_cast<int>(220 * (1 - t) + 30);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

std::string carpet_to_svg(const Carpet& S, const SvgOptions& opts) {
    const ChartRect c = S.region.chart();
    const double scale = opts.width / c.du();
    const double H = c.dv() * scale;
    std::ostringstream out;
    open_svg(out, opts.width, H, opts.timestamp);
    auto X = [&](double u) { return (u - c.u0) * scale; };
    auto Y = [&](double v) { return H - (v - c.v0) * scale; };
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(opts.width) << "\" height=\"" << fmt(H)
        << "\" fill=\"#f4efe8\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    auto hole_rect = [&](double x0, double y0, double w, double h, const char* fill) {
        out << "<rect x=\"" << fmt(X(x0)) << "\" y=\"" << fmt(Y(y0 + h)) << "\" width=\""
            << fmt(w * scale) << "\" height=\"" << fmt(h * scale) << "\" fill=\"" << fill
            << "\"/>\n";
    };
    for (const auto& h : S.holes) hole_rect(h.x0(), h.y0(), h.side, h.side, "#40506a");
    if (S.has_k())
        hole_rect(S.region.ks, S.region.kt, S.region.kw, S.region.kh, "#8a3030");
    out << "</svg>\n";
    return out.str();
}

std::string density_to_svg(const Density& d, const SvgOptions& opts) {
    const GridSpec& g = d.grid;
    const ChartRect c = g.region.chart();
    const double scale = opts.width / c.du();
    const double H = c.dv() * scale;
    const double legend_w = 48;
    double vmax = 0;
    for (double v : d.values) vmax = std::max(vmax, v);
    if (vmax <= 0) vmax = 1;
    std::ostringstream out;
    open_svg(out, opts.width + legend_w, H, opts.timestamp);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const double v = d.values[g.cell_index(ix, iy)];
            out << "<rect x=\"" << fmt(ix * g.du * scale) << "\" y=\""
                << fmt(H - (iy + 1) * g.dv * scale) << "\" width=\"" << fmt(g.du * scale + 0.5)
                << "\" height=\"" << fmt(g.dv * scale + 0.5) << "\" fill=\"" << ramp(v / vmax)
                << "\"/>\n";
        }
    }
    // legend
    const int steps = 24;
    for (int i = 0; i < steps; ++i) {
        out << "<rect x=\"" << fmt(opts.width + 8) << "\" y=\"" << fmt(H * (1.0 - (i + 1.0) / steps))
            << "\" width=\"16\" height=\"" << fmt(H / steps + 0.5) << "\" fill=\""
            << ramp((i + 0.5) / steps) << "\"/>\n";
    }
    out << "<text x=\"" << fmt(opts.width + 28) << "\" y=\"12\" font-size=\"11\">" << fmt(vmax)
        << "</text>\n";
    out << "<text x=\"" << fmt(opts.width + 28) << "\" y=\"" << fmt(H - 2)
        << "\" font-size=\"11\">0</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string manifest_to_svg(const TowerManifest& m, const SvgOptions& opts) {
    const double W = opts.width, H = 0.6 * W, pad = 40;
    std::ostringstream out;
    open_svg(out, W, H, opts.timestamp);
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(W) << "\" height=\"" << fmt(H)
        << "\" fill=\"#ffffff\" stroke=\"#333\"/>\n";
    if (!m.rings.empty()) {
        double rmax = 0;
        for (const auto& r : m.rings) rmax = std::max(rmax, r.residual);
        if (rmax <= 0) rmax = 1e-16;
        std::ostringstream pts;
        for (std::size_t i = 0; i < m.rings.size(); ++i) {
            const double x = pad + (W - 2 * pad) * (m.rings.size() == 1
                                                        ? 0.5
                                                        : static_cast<double>(i) /
                                                              (m.rings.size() - 1));
            const double y = H - pad - (H - 2 * pad) * (m.rings[i].residual / rmax);
            pts << fmt(x) << "," << fmt(y) << " ";
            out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"#8a3030\"/>\n";
        }
        out << "<polyline points=\"" << pts.str()
            << "\" fill=\"none\" stroke=\"#40506a\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << fmt(pad) << "\" y=\"" << fmt(H - 8) << "\" font-size=\"11\">ring index vs "
            << "k-fold residual (max " << fmt(rmax) << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace qcarpet
