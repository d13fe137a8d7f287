#include "dca/quadrature.hpp"

#include <array>
#include <cmath>

#include "dca/errors.hpp"

namespace dca {

namespace {

constexpr int kOrder = 8;

struct GaussRule {
    std::array<double, kOrder> node{};
    std::array<double, kOrder> weight{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n from the
// Chebyshev initial guess; accurate to machine precision at this order.
GaussRule make_rule() {
    GaussRule r;
    const int n = kOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = r.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& rule() {
    static const GaussRule r = make_rule();
    return r;
}

double panel(const Integrand& f, double x0, double y0, double x1, double y1) {
    const GaussRule& r = rule();
    const double hx = 0.5 * (x1 - x0), cx = 0.5 * (x0 + x1);
    const double hy = 0.5 * (y1 - y0), cy = 0.5 * (y0 + y1);
    double s = 0.0;
    for (int i = 0; i < kOrder; ++i) {
        double row = 0.0;
        const double x = cx + hx * r.node[i];
        for (int j = 0; j < kOrder; ++j) row += r.weight[j] * f({x, cy + hy * r.node[j]});
        s += r.weight[i] * row;
    }
    return s * hx * hy;
}

double adapt(const Integrand& f, double x0, double y0, double x1, double y1, double tol,
             double whole, int depth) {
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    const double q[4] = {panel(f, x0, y0, xm, ym), panel(f, xm, y0, x1, ym),
                         panel(f, x0, ym, xm, y1), panel(f, xm, ym, x1, y1)};
    const double refined = q[0] + q[1] + q[2] + q[3];
    if (std::abs(refined - whole) <= tol || depth >= 30)
        return refined;
    const double t4 = 0.25 * tol;
    return adapt(f, x0, y0, xm, ym, t4, q[0], depth + 1) +
           adapt(f, xm, y0, x1, ym, t4, q[1], depth + 1) +
           adapt(f, x0, ym, xm, y1, t4, q[2], depth + 1) +
           adapt(f, xm, ym, x1, y1, t4, q[3], depth + 1);
}

} // namespace

double integrate_rect(const Integrand& f, double x0, double y0, double x1, double y1,
                      double abs_tol) {
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("integrate_rect: empty rectangle");
    return adapt(f, x0, y0, x1, y1, abs_tol, panel(f, x0, y0, x1, y1), 0);
}

double integrate_disk(const Integrand& f, Vec2 center, double radius, double abs_tol) {
    if (!(radius > 0)) throw std::invalid_argument("integrate_disk: radius must be positive");
    Integrand polar = [&](Vec2 rt) {
        const double rho = rt.x, theta = rt.y;
        return rho * f({center.x + rho * std::cos(theta), center.y + rho * std::sin(theta)});
    };
    return integrate_rect(polar, 0.0, 0.0, radius, 2.0 * kPi, abs_tol);
}

double integrate_domain(const Domain& domain, const Integrand& f, double abs_tol) {
    if (domain.shape == Domain::Shape::disk)
        return integrate_disk(f, {domain.cx, domain.cy}, domain.r, abs_tol);
    return integrate_rect(f, domain.x0, domain.y0, domain.x1, domain.y1, abs_tol);
}

} // namespace dca
