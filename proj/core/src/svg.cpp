#include "dca/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "dca/errors.hpp"

namespace dca {

namespace {

// 256-entry map: piecewise-linear between three anchors at indices 0, 128,
// 255. Index = floor(t * 256) clamped, t the position of the face value in
// [min u, max u].
void map_color(int index, int rgb[3]) {
    static const int anchor[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const int half = index < 128 ? 0 : 1;
    const double t = (index - 128 * half) / (half ? 127.0 : 128.0);
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(anchor[half][c] * (1 - t) + anchor[half + 1][c] * t));
}

void append(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

} // namespace

std::string render_svg(const QuadLattice& L, const VertexFunction& u, const SvgOptions& opt) {
    if (u.size() != L.points.size())
        throw std::invalid_argument("render_svg: expected one value per vertex");
    double xmin = L.points[0].x, xmax = xmin, ymin = L.points[0].y, ymax = ymin;
    for (const Vec2& p : L.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    double umin = *std::min_element(u.begin(), u.end());
    double umax = *std::max_element(u.begin(), u.end());

    const double margin = 0.04 * std::max(xmax - xmin, ymax - ymin);
    const double w = xmax - xmin + 2 * margin, h = ymax - ymin + 2 * margin;
    const double scale = opt.width / w;
    // SVG y runs downward; flip the lattice into screen coordinates.
    auto X = [&](Vec2 p) { return (p.x - xmin + margin) * scale; };
    auto Y = [&](Vec2 p) { return (ymax + margin - p.y) * scale; };

    std::string out;
    append(out,
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.6g\" height=\"%.6g\" "
           "viewBox=\"0 0 %.6g %.6g\">\n",
           opt.width, h * scale, opt.width, h * scale);
    append(out, "<!-- u range [%.6g, %.6g] -->\n", umin, umax);

    for (int f = 0; f < L.face_count(); ++f) {
        auto pts = L.face_points(f);
        double mean = 0.0;
        for (int k = 0; k < 4; ++k) mean += u[L.faces[f].v[k]];
        mean *= 0.25;
        int index = 128;
        if (umax > umin) {
            index = static_cast<int>((mean - umin) / (umax - umin) * 256.0);
            index = std::clamp(index, 0, 255);
        }
        int rgb[3];
        map_color(index, rgb);
        append(out, "<polygon points=\"%.6g,%.6g %.6g,%.6g %.6g,%.6g %.6g,%.6g\" "
                    "fill=\"#%02x%02x%02x\" stroke=\"#555555\" stroke-width=\"0.5\"/>\n",
               X(pts[0]), Y(pts[0]), X(pts[1]), Y(pts[1]), X(pts[2]), Y(pts[2]), X(pts[3]),
               Y(pts[3]), rgb[0], rgb[1], rgb[2]);
    }

    if (opt.label_vertices) {
        const double r = 0.006 * opt.width;
        for (int i = 0; i < L.vertex_count(); ++i) {
            append(out, "<circle cx=\"%.6g\" cy=\"%.6g\" r=\"%.6g\" fill=\"#222222\"/>\n",
                   X(L.points[i]), Y(L.points[i]), r);
            append(out, "<text x=\"%.6g\" y=\"%.6g\" font-size=\"%.6g\" fill=\"#111111\">",
                   X(L.points[i]) + 1.5 * r, Y(L.points[i]) - 1.5 * r, 0.022 * opt.width);
            char val[64];
            std::snprintf(val, sizeof val, "%.*g", opt.label_precision, u[i]);
            out += val;
            out += "</text>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

void emit_svg(const QuadLattice& L, const VertexFunction& u, const std::string& path,
              const SvgOptions& opt) {
    std::string body = render_svg(L, u, opt);
    std::FILE* file = std::fopen(path.c_str(), "wb");
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    size_t written = std::fwrite(body.data(), 1, body.size(), file);
    int rc = std::fclose(file);
    if (written != body.size() || rc != 0)
        throw IoError("failed to write '" + path + "'");
}

} // namespace dca
