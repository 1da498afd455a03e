#include "atlas/two_excitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace atlas {

namespace {

constexpr double kPi = std::numbers::pi;

// Ratios pinning the family-0 bridge window to the critical coupling; at
// lambda = 0.1 the endpoints are mu = 6.3662e-3 (last coupling where the
// real root is still resolvable) and mu = 7e-3 (restart coupling).
constexpr double kMuCritRef = 6.366197723675814e-3;
// the tiny relative pads keep grid points given exactly at the reference
// endpoints on the resolvable side of the window despite rounding
constexpr double kRealZeroLimitRatio = 6.3662e-3 * (1.0 + 1e-9) / kMuCritRef;
constexpr double kRestartMuRatio = 7.0e-3 * (1.0 - 1e-9) / kMuCritRef;
// Restart location for the lower_right branch at lambda = 0.1, scaled by
// (lambda/0.1)^2 for other couplings.
const cplx kRestartSeedRef(2.8e-4, -2.4e-5);

void check_finite(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::runtime_error("non-finite-point");
}

void check_branch_region(const two_exc_context& ctx, cplx z,
                         branch_tag2 branch) {
    if (ctx.model.mu == 0.0) {
        if (branch != branch_tag2::principal_real)
            throw std::runtime_error("mu-zero");
        return;  // rational limit, no cut anywhere
    }
    switch (branch) {
        case branch_tag2::principal_real:
            if (z.imag() == 0.0 && z.real() >= 0.0)
                throw std::runtime_error("singular-integrand");
            if (z.imag() < 0.0 && z.real() > 0.0)
                throw std::runtime_error("branch-region-violation");
            break;
        case branch_tag2::loop_a0:
            if (z.real() >= 0.0)
                throw std::runtime_error("branch-region-violation");
            break;
        case branch_tag2::lower_right:
        case branch_tag2::lower_right_near_z12:
            if (!(z.real() > 0.0 && z.imag() < 0.0))
                throw std::runtime_error("branch-region-violation");
            break;
    }
}

// +2*pi*i times the residue picked up when the integration ray is dragged
// across the pole of 1/f sitting at the one-excitation root zi1.
cplx residue_term(const two_level_model& m, cplx z, cplx zi1, sheet_tag sheet) {
    const cplx dfd = eval_f_derivative(m, zi1, sheet);
    if (std::abs(dfd) < 1e-8)
        throw std::runtime_error("residue-derivative-vanishes");
    const double l2 = m.lambda * m.lambda;
    const cplx q0 = z - zi1;
    return cplx(0.0, 4.0 * kPi) * (l2 / m.mu) * eval_g2(q0 / m.mu) /
           ((2.0 * zi1 - z) * dfd);
}

// Continuation of 1 - C1 into the lower-right quadrant: the half-line
// integral is rerouted through [0, re z] on the continued sheet, resumes on
// the principal sheet past re z, and collects the half residue at q = z/2
// plus, when gamma0(z) crosses the shifted ray z01 + R+, the full residue at
// q = z - z01. The near-z12 variant adds the residue at q = z - z11.
cplx lower_right_value(const two_exc_context& ctx, cplx z, bool near_z12,
                       const quadrature_settings& qs) {
    const two_level_model& m = ctx.model;
    const double mu = m.mu;
    const double l2 = m.lambda * m.lambda;
    const double x = z.real();

    const auto integrand = [&](sheet_tag sheet) {
        return [&m, z, mu, sheet](cplx q) {
            return eval_g2(q / mu) /
                   ((z - 2.0 * q) * eval_f(m, z - q, sheet));
        };
    };

    // split points keep the adaptive panels aligned with the sharp peaks the
    // integrand develops opposite the pole at z/2 and the f roots
    std::vector<double> cuts{0.0, 0.5 * x, x};
    for (double s : {x - ctx.z01.real(), x - ctx.z11.real()})
        if (s > 0.0 && s < x) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());

    cplx total(0.0, 0.0);
    const auto continued = integrand(sheet_tag::continued_plus);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            total += integrate_segment(continued, cuts[i], cuts[i + 1], qs);

    std::vector<double> tail{x};
    for (double s : {x - ctx.z01.real(), x - ctx.z11.real()})
        if (s > x) tail.push_back(s);
    std::sort(tail.begin(), tail.end());
    const auto principal = integrand(sheet_tag::principal);
    for (std::size_t i = 0; i + 1 < tail.size(); ++i)
        total += integrate_segment(principal, tail[i], tail[i + 1], qs);
    total += integrate_ray(principal, tail.back(), qs);

    total -= cplx(0.0, kPi) * eval_g2(z / (2.0 * mu)) /
             eval_f(m, 0.5 * z, sheet_tag::continued_plus);

    cplx value = 1.0 - (2.0 * l2 / mu) * total;

    const double base = zeta_eigenvalue(0, 2, m.lambda) - 0.05;
    if (crossings_of_shifted_ray(gamma0_path(base, z, 1e-3), ctx.z01) != 0)
        value += residue_term(m, z, ctx.z01, sheet_tag::continued_plus);
    if (near_z12)
        value += residue_term(m, z, ctx.z11, sheet_tag::continued_plus);
    return value;
}

void validate_grid(double lambda, const std::vector<double>& mu_grid) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda-not-positive");
    if (mu_grid.empty()) throw std::invalid_argument("mu-grid-empty");
    for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i)
        if (!(mu_grid[i] < mu_grid[i + 1]))
            throw std::invalid_argument("mu-grid-not-increasing");
    if (mu_grid.front() < 0.0) throw std::invalid_argument("mu-negative");
}

// Root continuation in mu shared by the two-excitation tracers: geometric
// substeps, linear seed extrapolation, a jump guard, and step halving when a
// solve fails or lands too far from the prediction.
class mu_march {
public:
    mu_march(std::function<cplx(double, cplx)> objective, double muc,
             double start_mu, std::function<cplx(double)> start_seed,
             std::string start_error, std::string lost_error,
             double max_abs_imag = std::numeric_limits<double>::infinity())
        : objective_(std::move(objective)),
          muc_(muc),
          start_mu_(start_mu),
          start_seed_(std::move(start_seed)),
          start_error_(std::move(start_error)),
          lost_error_(std::move(lost_error)),
          max_abs_imag_(max_abs_imag) {}

    trace_sample sample_at(double target) {
        if (!started_) {
            const double mu0 = std::min(target, start_mu_);
            if (!attempt(mu0, start_seed_(mu0)))
                throw std::runtime_error(start_error_);
            started_ = true;
        }
        while (mu_ < target * (1.0 - 1e-15)) {
            const double cap = std::max(mu_ * 0.30, muc_ / 16.0);
            advance(std::min(target, mu_ + cap));
        }
        trace_sample s;
        s.mu = target;
        s.z = z_;
        s.residual = last_.residual;
        s.iterations = last_.iterations;
        return s;
    }

private:
    bool attempt(double mu_next, cplx seed) {
        root_result r;
        try {
            r = find_root_complex(
                [&](cplx zz) { return objective_(mu_next, zz); }, seed, 1e-11,
                80, 0.2 * (1.0 + std::abs(seed)));
        } catch (const std::exception&) {
            return false;
        }
        if (!r.converged) return false;
        if (std::abs(r.root.imag()) > max_abs_imag_) return false;
        if (started_) {
            const double jump_tol = std::max(5.0 * std::abs(seed - z_) + 1e-9,
                                             0.3 * (std::abs(z_) + 1e-3));
            if (std::abs(r.root - z_) > jump_tol) return false;
        }
        mu_prev_ = mu_;
        z_prev_ = z_;
        mu_ = mu_next;
        z_ = r.root;
        last_ = r;
        return true;
    }

    void advance(double mu_next) {
        double target = mu_next;
        for (int halve = 0; halve <= 6; ++halve) {
            cplx seed = z_;
            if (mu_prev_ >= 0.0 && mu_ > mu_prev_)
                seed = z_ + (z_ - z_prev_) * ((target - mu_) / (mu_ - mu_prev_));
            if (attempt(target, seed)) return;
            target = 0.5 * (mu_ + target);
        }
        throw std::runtime_error(lost_error_);
    }

    std::function<cplx(double, cplx)> objective_;
    double muc_;
    double start_mu_;
    std::function<cplx(double)> start_seed_;
    std::string start_error_;
    std::string lost_error_;
    double max_abs_imag_;
    bool started_ = false;
    double mu_ = -1.0;
    double mu_prev_ = -1.0;
    cplx z_{};
    cplx z_prev_{};
    root_result last_{};
};

// Continuation objectives need tighter quadrature than point evaluations:
// near the decoupled eigenvalues the determinant derivative is O(1e-4), so
// integration noise moves the located root by noise / |derivative|.
quadrature_settings march_quadrature() { return {1e-14, 1e-12, 4000}; }

// Objective factory with a per-coupling context cache (contexts are
// expensive relative to a determinant evaluation and Newton reuses one mu
// many times in a row).
std::function<cplx(double, cplx)> branch_objective(double lambda,
                                                   branch_tag2 branch) {
    auto cache = std::make_shared<std::pair<double, two_exc_context>>(
        -1.0, two_exc_context{});
    return [lambda, branch, cache](double mu, cplx z) {
        if (cache->first != mu) {
            cache->second = make_context({lambda, mu});
            cache->first = mu;
        }
        return eval_D1(cache->second, z, branch, march_quadrature());
    };
}

}  // namespace

const char* to_string(branch_tag2 branch) {
    switch (branch) {
        case branch_tag2::principal_real:
            return "principal_real";
        case branch_tag2::loop_a0:
            return "loop_a0";
        case branch_tag2::lower_right:
            return "lower_right";
        case branch_tag2::lower_right_near_z12:
            return "lower_right_near_z12";
    }
    return "unknown";
}

two_exc_context make_context(const two_level_model& model) {
    if (model.lambda <= 0.0) throw std::invalid_argument("lambda-not-positive");
    if (model.mu == 0.0) throw std::runtime_error("mu-zero");
    if (model.mu < 0.0) throw std::invalid_argument("mu-negative");
    two_exc_context ctx;
    ctx.model = model;
    ctx.z01 = trace_resonance_in_mu(model.lambda, 0, {model.mu}).samples.front().z;
    ctx.z11 = trace_resonance_in_mu(model.lambda, 1, {model.mu}).samples.front().z;
    return ctx;
}

cplx eval_T(const two_level_model& model, cplx z,
            const std::function<double(double)>& weights, double p,
            const quadrature_settings& settings) {
    check_finite(z);
    const double ap = std::abs(p);
    if (z.imag() == 0.0 && z.real() >= model.mu * ap)
        throw std::runtime_error("denominator-vanishes");
    const auto integrand = [&](cplx q) {
        const double qr = q.real();
        return eval_g(qr) * weights(qr) / (z - model.mu * (ap + qr));
    };
    return 2.0 * integrate_ray(integrand, 0.0, settings);
}

cplx eval_K_kernel(const two_exc_context& ctx, cplx z, double p, double q) {
    check_finite(z);
    const two_level_model& m = ctx.model;
    const cplx pair_den = z - m.mu * (std::abs(p) + std::abs(q));
    if (std::abs(pair_den) == 0.0)
        throw std::runtime_error("singular-denominator");
    const cplx atom_den = eval_f(m, z - m.mu * std::abs(p), sheet_tag::principal);
    if (std::abs(atom_den) == 0.0)
        throw std::runtime_error("singular-denominator");
    return eval_g(p) * eval_g(q) / (atom_den * pair_den);
}

cplx eval_C1(const two_level_model& model, cplx z,
             const quadrature_settings& settings) {
    check_finite(z);
    if (model.lambda < 0.0) throw std::invalid_argument("lambda-negative");
    if (model.lambda == 0.0) return cplx(0.0, 0.0);
    const double l2 = model.lambda * model.lambda;
    if (model.mu == 0.0) {
        const cplx den = z * (z - 1.0) - l2;
        if (std::abs(den) <= 1e-13 * std::max(1.0, std::norm(z)))
            throw std::runtime_error("singular-denominator");
        return l2 / den;
    }
    if (model.mu < 0.0) throw std::invalid_argument("mu-negative");
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw std::runtime_error("singular-integrand");
    const double mu = model.mu;
    const auto integrand = [&](cplx q) {
        return eval_g2(q / mu) /
               ((z - 2.0 * q) * eval_f(model, z - q, sheet_tag::principal));
    };
    return (2.0 * l2 / mu) * integrate_ray(integrand, 0.0, settings);
}

cplx eval_D1(const two_exc_context& ctx, cplx z, branch_tag2 branch,
             const quadrature_settings& settings) {
    check_finite(z);
    if (ctx.model.lambda == 0.0) return cplx(1.0, 0.0);
    check_branch_region(ctx, z, branch);
    switch (branch) {
        case branch_tag2::principal_real:
            return 1.0 - eval_C1(ctx.model, z, settings);
        case branch_tag2::loop_a0:
            return 1.0 - eval_C1(ctx.model, z, settings) +
                   residue_term(ctx.model, z, ctx.z01, sheet_tag::principal);
        case branch_tag2::lower_right:
            return lower_right_value(ctx, z, false, settings);
        case branch_tag2::lower_right_near_z12:
            return lower_right_value(ctx, z, true, settings);
    }
    throw std::logic_error("unhandled branch tag");
}

resonance_trajectory trace_z02(double lambda,
                               const std::vector<double>& mu_grid) {
    validate_grid(lambda, mu_grid);
    const double muc = mu_critical(lambda);
    const double window_lo = kRealZeroLimitRatio * muc;
    const double window_hi = kRestartMuRatio * muc;
    const double seed_scale = (lambda / 0.1) * (lambda / 0.1);

    const auto real_objective = [lambda](double mu, cplx z) {
        return 1.0 - eval_C1({lambda, mu}, z, march_quadrature());
    };
    mu_march real_march(real_objective, muc, muc / 64.0,
                        [lambda](double) {
                            return cplx(zeta_eigenvalue(0, 2, lambda), 0.0);
                        },
                        "continuation-lost", "continuation-lost", 1e-10);
    mu_march lr_march(branch_objective(lambda, branch_tag2::lower_right), muc,
                      window_hi,
                      [seed_scale](double) { return kRestartSeedRef * seed_scale; },
                      "bridge-seed-failure", "continuation-lost");

    bool anchors_ready = false;
    double bridge_lo = 0.0;
    cplx bridge_hi;

    resonance_trajectory out;
    out.sector = "two";
    out.family = 0;
    for (double mu : mu_grid) {
        trace_sample s;
        if (mu == 0.0) {
            s.mu = 0.0;
            s.z = cplx(zeta_eigenvalue(0, 2, lambda), 0.0);
            s.branch = to_string(branch_tag2::principal_real);
        } else if (mu <= window_lo) {
            s = real_march.sample_at(mu);
            s.z = cplx(s.z.real(), 0.0);
            s.branch = to_string(branch_tag2::principal_real);
        } else if (mu >= window_hi) {
            s = lr_march.sample_at(mu);
            s.branch = to_string(branch_tag2::lower_right);
        } else {
            if (!anchors_ready) {
                bridge_lo = real_march.sample_at(window_lo).z.real();
                bridge_hi = lr_march.sample_at(window_hi).z;
                anchors_ready = true;
            }
            const double t = std::log(mu / window_lo) /
                             std::log(window_hi / window_lo);
            const cplx zb = (1.0 - t) * bridge_lo + t * bridge_hi;
            const two_exc_context ctx = make_context({lambda, mu});
            const branch_tag2 pick = (zb.real() > 0.0 && zb.imag() < 0.0)
                                         ? branch_tag2::lower_right
                                         : branch_tag2::principal_real;
            s.mu = mu;
            s.z = zb;
            s.branch = "bridge";
            s.residual = std::abs(eval_D1(ctx, zb, pick, {}));
            s.iterations = 0;
        }
        if (s.mu != mu) s.mu = mu;
        out.samples.push_back(std::move(s));
    }
    return out;
}

resonance_trajectory trace_z12(double lambda,
                               const std::vector<double>& mu_grid) {
    validate_grid(lambda, mu_grid);
    const double muc = mu_critical(lambda);
    mu_march march(branch_objective(lambda, branch_tag2::lower_right_near_z12),
                   muc, muc / 24.0,
                   [lambda](double mu0) {
                       return cplx(zeta_eigenvalue(1, 2, lambda), -3.0 * mu0);
                   },
                   "continuation-lost", "continuation-lost");

    resonance_trajectory out;
    out.sector = "two";
    out.family = 1;
    for (double mu : mu_grid) {
        trace_sample s;
        if (mu == 0.0) {
            s.mu = 0.0;
            s.z = cplx(zeta_eigenvalue(1, 2, lambda), 0.0);
        } else {
            s = march.sample_at(mu);
        }
        s.branch = to_string(branch_tag2::lower_right_near_z12);
        out.samples.push_back(std::move(s));
    }
    return out;
}

root_result find_a0_zero(const two_exc_context& ctx, cplx seed) {
    const two_level_model& m = ctx.model;
    if (m.lambda > 0.0 && m.mu >= mu_critical(m.lambda))
        throw std::runtime_error("mu-above-critical");
    return find_root_complex(
        [&](cplx z) { return eval_D1(ctx, z, branch_tag2::loop_a0, {}); },
        seed, 1e-9, 60, 0.2 * (1.0 + std::abs(seed)));
}

}  // namespace atlas
