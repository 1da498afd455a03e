#pragma once

#include <functional>
#include <vector>

#include "atlas/friedrichs.hpp"

namespace atlas {

// Analytic-continuation classes of the truncated two-excitation determinant.
// Each evaluator is only meaningful inside its validity region, which is
// checked as a precondition:
//   principal_real        near the negative real axis and the upper half-plane
//   loop_a0               re(z) < 0, continued around the branch point z01
//   lower_right           re(z) > 0, im(z) < 0
//   lower_right_near_z12  same quadrant, additionally continued past z11
enum class branch_tag2 {
    principal_real,
    loop_a0,
    lower_right,
    lower_right_near_z12,
};

const char* to_string(branch_tag2 branch);

// One-excitation roots entering the residue terms of the continued branches.
// Both must be converged zeros of the matching f-sheet at the same couplings
// (residual at most 1e-10); make_context guarantees that.
struct two_exc_context {
    two_level_model model;
    cplx z01{};
    cplx z11{};
};

two_exc_context make_context(const two_level_model& model);

// Photon-shift transform (T f)(p) = integral of g(q) f(q) / (z - mu(|p|+q))
// over the full line, folded onto [0, inf) by even symmetry of g*f.
// Requires z off the real interval [mu |p|, inf).
cplx eval_T(const two_level_model& model, cplx z,
            const std::function<double(double)>& weights, double p,
            const quadrature_settings& settings = {});

// Compact-kernel value K(p, q); the atom factor z - 1 - mu|p| - l^2 (T g)(p)
// is evaluated through the closed form of f at z - mu|p|.
cplx eval_K_kernel(const two_exc_context& ctx, cplx z, double p, double q);

// First Fredholm coefficient. For mu > 0 this is the half-line integral of
// g(q/mu)^2 / ((z - 2q) f(z - q)) times 2 lambda^2 / mu; at mu == 0 it
// degenerates to the rational limit lambda^2 / (z(z-1) - lambda^2).
cplx eval_C1(const two_level_model& model, cplx z,
             const quadrature_settings& settings = {});

// Truncated determinant 1 - C1 on the requested continuation branch.
cplx eval_D1(const two_exc_context& ctx, cplx z, branch_tag2 branch,
             const quadrature_settings& settings = {});

// Follows the family-0 two-excitation resonance over the mu grid. Below the
// real-zero limit the samples are real roots of the principal branch; past
// the restart coupling they are lower_right roots continued from a documented
// restart seed. Grid points inside the open window between those two
// couplings are emitted with branch "bridge": the root is not resolvable
// there, so the sample carries an interpolated location and the determinant
// magnitude at it instead of a converged zero.
resonance_trajectory trace_z02(double lambda, const std::vector<double>& mu_grid);

// Follows the family-1 two-excitation resonance (the Delta-form zero) from
// its decoupled germ across the mu grid.
resonance_trajectory trace_z12(double lambda, const std::vector<double>& mu_grid);

// Newton search for the loop_a0 branch zero near the given seed. Requires
// mu below the critical coupling when lambda > 0. A flat or divergent search
// reports converged == false rather than throwing.
root_result find_a0_zero(const two_exc_context& ctx, cplx seed);

}  // namespace atlas
