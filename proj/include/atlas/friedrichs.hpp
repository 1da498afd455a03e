#pragma once

#include <string>
#include <utility>
#include <vector>

#include "atlas/contour.hpp"

namespace atlas {

// Two-level emitter coupled to a photon half-line; lambda is the coupling,
// mu the photon dispersion scale.
struct two_level_model {
    double lambda = 0.1;
    double mu = 1.0;
};

// Branch bookkeeping for the dispersion function. principal carries the cut
// on [0, inf); continued_plus is the continuation through that cut from
// above; hat moves the cut onto the negative imaginary axis.
enum class sheet_tag { principal, continued_plus, hat };

const char* to_string(sheet_tag sheet);

// Coupling form factor and its square, sqrt(2/pi) p / (1+p^2).
double eval_g(double p);
double eval_g2(double p);
cplx eval_g2(cplx p);

// Dispersion function in closed form. Throws "mu-zero" when model.mu == 0,
// "evaluation-on-cut" on the principal sheet for real z >= 0 and at the
// branch point z = 0 on every sheet, "evaluation-at-pole" within 1e-12*mu of
// the continued-sheet poles at +-i*mu.
cplx eval_f(const two_level_model& model, cplx z,
            sheet_tag sheet = sheet_tag::principal);

// Analytic z-derivative on the same sheet conventions.
cplx eval_f_derivative(const two_level_model& model, cplx z,
                       sheet_tag sheet = sheet_tag::principal);

// Principal-sheet dispersion evaluated by direct quadrature of the defining
// integral; cross-check for the closed form, upper half-plane only.
cplx eval_f_quadrature(const two_level_model& model, cplx z,
                       const quadrature_settings& settings = {});

// Difference between the continued and principal determinations,
// 4*i*pi*lambda^2/mu * g2(z/mu).
cplx sheet_jump(const two_level_model& model, cplx z);

// Coupling threshold 2*lambda^2/pi separating the bound-state regime from
// the resonance regime of the lower family.
double mu_critical(double lambda);

// Decoupled-dispersion (mu = 0) eigenvalue of the n-quantum sector,
// (1 -+ sqrt(1+4n*lambda^2))/2 for family 0 / family 1.
double zeta_eigenvalue(int family, int n, double lambda);

// Normalized (emitter, photon) coefficients of the corresponding
// two-component eigenvector.
std::pair<double, double> phi_eigenvector_coeffs(int family, int n,
                                                 double lambda);

// Photon wave-function amplitude lambda*g(p)/(z01 - mu*|p|) of the bound
// state below the critical coupling; throws "mu-above-critical" otherwise.
cplx photon_amplitude_psi01(const two_level_model& model, double p);

// Newton solve of eval_f(., sheet) = 0 from the given seed.
root_result solve_resonance(const two_level_model& model, cplx seed,
                            sheet_tag sheet, double tol = 1e-12,
                            int max_iterations = 60, double step_cap = 0.0);

struct trace_sample {
    double mu = 0.0;  // grid abscissa (or arc-length parameter on paths)
    cplx z{};
    std::string branch;
    double residual = 0.0;
    int iterations = 0;
};

struct resonance_trajectory {
    std::string sector;
    int family = 0;
    std::vector<trace_sample> samples;
};

// Follows the family-0 or family-1 resonance across the given increasing mu
// grid at fixed lambda. A mu == 0 entry yields the exact decoupled value.
// Family 0 switches from the real bound state to the continued sheet at
// mu_critical; internal substeps with a root-jump guard keep the branch
// identity between grid points.
resonance_trajectory trace_resonance_in_mu(double lambda, int family,
                                           const std::vector<double>& mu_grid);

// Piecewise-linear path in the (lambda, mu) plane, sampled uniformly in arc
// length with `samples` points including both endpoints.
struct parameter_path {
    std::vector<std::pair<double, double>> waypoints;
    int samples = 100;
};

// Continues a resonance along the parameter path on a fixed sheet, starting
// from the given root at the first waypoint. Sample.mu holds the arc-length
// parameter. Throws "pole-approach" when the root comes too close to the
// branch point 0 or the continued-sheet pole -i*mu.
resonance_trajectory trace_resonance_along_path(const parameter_path& path,
                                                cplx start, sheet_tag sheet);

}  // namespace atlas
