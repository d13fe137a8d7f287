#include "dca/geometry.hpp"

#include <algorithm>

namespace dca {

double polygon_signed_area(const std::vector<Vec2>& pts) {
    double s = 0.0;
    const size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    const size_t n = poly.size();
    // Boundary points count as inside.
    for (size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) == 0.0) return true;
    }
    // Crossing-number test.
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double t = (p.y - a.y) / (b.y - a.y);
            double xint = a.x + t * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = norm2(ab);
    if (len2 == 0.0) return norm(p - a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

double polygon_boundary_distance(Vec2 p, const std::vector<Vec2>& poly) {
    double d = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    }
    return d;
}

namespace {
int orient_sign(Vec2 a, Vec2 b, Vec2 c) {
    double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}
bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}
} // namespace

bool segments_intersect_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    // Shared endpoints are allowed (adjacent polygon edges).
    if (a == c || a == d || b == c || b == d) return false;
    int o1 = orient_sign(a, b, c);
    int o2 = orient_sign(a, b, d);
    int o3 = orient_sign(c, d, a);
    int o4 = orient_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    // Collinear overlap cases.
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace dca
