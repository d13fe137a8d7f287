#pragma once

#include <functional>

#include "dca/geometry.hpp"
#include "dca/lattice.hpp"

namespace dca {

using Integrand = std::function<double(Vec2)>;

// Adaptive tensor Gauss-Legendre quadrature over an axis-aligned rectangle,
// refined by quadrant splitting until the embedded error estimate drops
// below abs_tol. Intended for smooth integrands.
double integrate_rect(const Integrand& f, double x0, double y0, double x1, double y1,
                      double abs_tol = 1e-12);

// Disk integral via the polar map (rho, theta) -> center + rho e^{i theta},
// which keeps the integrand smooth up to the boundary circle.
double integrate_disk(const Integrand& f, Vec2 center, double radius, double abs_tol = 1e-12);

// Dispatch on the domain shape.
double integrate_domain(const Domain& domain, const Integrand& f, double abs_tol = 1e-12);

} // namespace dca
