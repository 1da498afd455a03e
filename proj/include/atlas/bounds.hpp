#pragma once

#include <string>

#include "atlas/contour.hpp"
#include "atlas/friedrichs.hpp"

namespace atlas {

// Error control for cutting the determinant expansion after its first
// nontrivial coefficient: the exact second-order coefficient, majorants for
// orders three and four, the derivative of the first coefficient, and the
// resulting shift estimate for a located zero.
struct bound_report {
    double c2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double dz_c1 = 0.0;
    double correction_magnitude = 0.0;
    // records the terms the shift estimate drops; serialized with the report
    std::string note;
};

// Second expansion coefficient as a double integral over the folded quadrant.
// With absolute=true the modulus of the integrand is integrated instead; the
// result then dominates the signed value and is the quantity used in the
// order-decay comparison at complex evaluation points. Returns its
// zero-dispersion limit 0 at mu = 0.
cplx eval_C2(const two_level_model& model, cplx z, bool absolute = false,
             const quadrature_settings& settings = {});

// Majorants of the third and fourth expansion coefficients obtained from
// power-mean inequalities on the kernel. Both are nonnegative by
// construction and vanish at mu = 0 like the second coefficient.
double eval_M3(const two_level_model& model, cplx z,
               const quadrature_settings& settings = {});
double eval_M4(const two_level_model& model, cplx z,
               const quadrature_settings& settings = {});

// Derivative of the first expansion coefficient with respect to z. At mu = 0
// the coefficient is rational and the derivative is returned in closed form.
cplx eval_dzC1(const two_level_model& model, cplx z,
               const quadrature_settings& settings = {});

// Magnitude of the first-order shift of a located determinant zero caused by
// the dropped higher orders: (C2/2 + M3/6) / |dzC1|.
double correction_estimate(const two_level_model& model, cplx z0,
                           const quadrature_settings& settings = {});

// All bound quantities at one evaluation point. Complex points are recorded
// by modulus so the report stays real-valued.
bound_report make_bound_report(const two_level_model& model, cplx z,
                               const quadrature_settings& settings = {});

}  // namespace atlas
