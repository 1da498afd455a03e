#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace atlas {

using cplx = std::complex<double>;

using complex_fn = std::function<cplx(cplx)>;

struct quadrature_settings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

struct root_result {
    cplx root{};
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Directed polygonal chain; consecutive vertices are joined by straight
// segments.
struct polyline_path {
    std::vector<cplx> vertices;
};

// Adaptive Gauss-Kronrod 15(7) integral of f over the straight segment from a
// to b. Throws std::runtime_error("quadrature-tolerance-not-met") when the
// subdivision budget is exhausted before the error estimate drops below
// max(abs_tol, rel_tol * |result|).
cplx integrate_segment(const complex_fn& f, cplx a, cplx b,
                       const quadrature_settings& settings = {});

// Integral of f over the whole polyline, leg by leg.
cplx integrate_path(const complex_fn& f, const polyline_path& path,
                    const quadrature_settings& settings = {});

// Integral of f over the real ray [a, +inf), mapped to [0,1) by
// q = a + t/(1-t). The integrand must decay fast enough for the transformed
// integrand to stay bounded (O(1/q^2) or better).
cplx integrate_ray(const complex_fn& f, double a,
                   const quadrature_settings& settings = {});

// Signed count of crossings of the horizontal rightward ray
// {anchor + t : t > 0} by the directed polyline. A leg passing from above the
// ray's line to below it counts +1, the opposite direction -1; crossings left
// of the anchor are ignored. Vertices landing on the ray (within 1e-14) are
// resolved by nudging the anchor down by 1e-12 and recounting.
int crossings_of_shifted_ray(const polyline_path& path, cplx anchor);

// Damped Newton iteration with a central finite-difference derivative
// (h = 1e-7 * (1 + |z|)) and step backtracking. step_cap limits the length of
// a single Newton step; 0 means uncapped. Convergence criterion is
// |f(root)| <= tol.
root_result find_root_complex(const complex_fn& f, cplx seed, double tol,
                              int max_iterations, double step_cap = 0.0);

// Four-vertex deformation path: base -> base + i*eps -> Re(z) + i*eps -> z.
// base is a real abscissa left of the region of interest; eps > 0 keeps the
// horizontal run just above the real axis.
polyline_path gamma0_path(double base, cplx z, double eps);

}  // namespace atlas
