#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace dca {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Counterclockwise rotation by pi/2: the "*" operator applied to gradients.
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

inline Complex to_complex(Vec2 a) { return {a.x, a.y}; }
inline Vec2 to_vec(Complex z) { return {z.real(), z.imag()}; }

// Signed polygon area (shoelace); positive for counterclockwise order.
double polygon_signed_area(const std::vector<Vec2>& pts);

// Point-in-polygon by winding; boundary points count as inside.
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Distance from p to the polygon's boundary (min over edges).
double polygon_boundary_distance(Vec2 p, const std::vector<Vec2>& poly);

// True if open segments (a,b) and (c,d) cross at a single interior point or
// overlap; shared endpoints do not count.
bool segments_intersect_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

} // namespace dca
