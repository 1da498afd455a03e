#include "atlas/friedrichs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace atlas {

namespace {

constexpr double kPi = std::numbers::pi;

// Principal Log(-z). Real positive z is resolved as the limit from below the
// cut, which is the determination every continued-sheet formula needs there.
cplx log_minus(cplx z) {
    if (z.imag() == 0.0 && z.real() > 0.0)
        return cplx(std::log(z.real()), kPi);
    return std::log(-z);
}

void check_domain(const two_level_model& model, cplx z, sheet_tag sheet) {
    if (model.mu == 0.0) throw std::runtime_error("mu-zero");
    if (model.lambda < 0.0) throw std::invalid_argument("lambda-negative");
    if (z == cplx(0.0, 0.0)) throw std::runtime_error("evaluation-on-cut");
    if (sheet == sheet_tag::principal && z.imag() == 0.0 && z.real() > 0.0)
        throw std::runtime_error("evaluation-on-cut");
}

bool jump_applies(cplx z, sheet_tag sheet) {
    switch (sheet) {
        case sheet_tag::principal:
            return false;
        case sheet_tag::continued_plus:
            return true;
        case sheet_tag::hat:
            return z.real() > 0.0 && z.imag() <= 0.0;
    }
    return false;
}

void check_pole(const two_level_model& model, cplx z) {
    const double guard = 1e-12 * model.mu;
    if (std::abs(z - cplx(0.0, model.mu)) < guard ||
        std::abs(z + cplx(0.0, model.mu)) < guard)
        throw std::runtime_error("evaluation-at-pole");
}

}  // namespace

const char* to_string(sheet_tag sheet) {
    switch (sheet) {
        case sheet_tag::principal:
            return "principal";
        case sheet_tag::continued_plus:
            return "continued_plus";
        case sheet_tag::hat:
            return "hat";
    }
    return "unknown";
}

double eval_g(double p) {
    return std::sqrt(2.0 / kPi) * p / (1.0 + p * p);
}

double eval_g2(double p) {
    const double d = 1.0 + p * p;
    return (2.0 / kPi) * p * p / (d * d);
}

cplx eval_g2(cplx p) {
    const cplx d = 1.0 + p * p;
    return (2.0 / kPi) * p * p / (d * d);
}

cplx sheet_jump(const two_level_model& model, cplx z) {
    if (model.mu == 0.0) throw std::runtime_error("mu-zero");
    const double l2 = model.lambda * model.lambda;
    return cplx(0.0, 4.0 * kPi) * (l2 / model.mu) * eval_g2(z / model.mu);
}

cplx eval_f(const two_level_model& model, cplx z, sheet_tag sheet) {
    check_domain(model, z, sheet);
    const double mu = model.mu;
    const double l2 = model.lambda * model.lambda;
    const cplx L = std::log(cplx(mu, 0.0)) - log_minus(z);
    const cplx z2 = z * z;
    const cplx N = 2.0 * mu * mu * mu + kPi * mu * mu * z + 2.0 * mu * z2 -
                   kPi * z2 * z + 4.0 * mu * z2 * L;
    const cplx denom = mu * mu + z2;
    cplx f = z - 1.0 + l2 * N / (kPi * denom * denom);
    if (jump_applies(z, sheet)) {
        check_pole(model, z);
        f += sheet_jump(model, z);
    }
    return f;
}

cplx eval_f_derivative(const two_level_model& model, cplx z, sheet_tag sheet) {
    check_domain(model, z, sheet);
    const double mu = model.mu;
    const double l2 = model.lambda * model.lambda;
    const cplx L = std::log(cplx(mu, 0.0)) - log_minus(z);
    const cplx z2 = z * z;
    const cplx N = 2.0 * mu * mu * mu + kPi * mu * mu * z + 2.0 * mu * z2 -
                   kPi * z2 * z + 4.0 * mu * z2 * L;
    const cplx Np = kPi * mu * mu - 3.0 * kPi * z2 + 8.0 * mu * z * L;
    const cplx denom = mu * mu + z2;
    cplx fp = 1.0 + (l2 / kPi) * (Np * denom - 4.0 * z * N) /
                        (denom * denom * denom);
    if (jump_applies(z, sheet)) {
        check_pole(model, z);
        const cplx w = z / mu;
        const cplx d = 1.0 + w * w;
        fp += cplx(0.0, 16.0) * (l2 / (mu * mu)) * w * (1.0 - w * w) /
              (d * d * d);
    }
    return fp;
}

cplx eval_f_quadrature(const two_level_model& model, cplx z,
                       const quadrature_settings& settings) {
    check_domain(model, z, sheet_tag::principal);
    const double l2 = model.lambda * model.lambda;
    const cplx tail = integrate_ray(
        [&](cplx q) {
            const double p = q.real();
            return eval_g2(p) / (z - model.mu * p);
        },
        0.0, settings);
    return z - 1.0 - 2.0 * l2 * tail;
}

double mu_critical(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("lambda-not-positive");
    return 2.0 * lambda * lambda / kPi;
}

double zeta_eigenvalue(int family, int n, double lambda) {
    if (family != 0 && family != 1)
        throw std::invalid_argument("family-out-of-range");
    if (n < 1) throw std::invalid_argument("quantum-number-out-of-range");
    const double s = std::sqrt(1.0 + 4.0 * n * lambda * lambda);
    return family == 0 ? 0.5 * (1.0 - s) : 0.5 * (1.0 + s);
}

std::pair<double, double> phi_eigenvector_coeffs(int family, int n,
                                                 double lambda) {
    const double zeta = zeta_eigenvalue(family, n, lambda);
    const double c = std::sqrt(static_cast<double>(n)) * lambda;
    const double norm = std::sqrt(zeta * zeta + c * c);
    return {zeta / norm, c / norm};
}

root_result solve_resonance(const two_level_model& model, cplx seed,
                            sheet_tag sheet, double tol, int max_iterations,
                            double step_cap) {
    return find_root_complex(
        [&](cplx z) { return eval_f(model, z, sheet); }, seed, tol,
        max_iterations, step_cap);
}

namespace {

// Continuation engine for the two one-excitation families: walks mu upward
// with geometric substeps, linear seed extrapolation, and a jump guard that
// rejects roots far from the predicted location (then halves the step).
class one_exc_tracer {
public:
    one_exc_tracer(double lambda, int family)
        : lambda_(lambda), family_(family), muc_(mu_critical(lambda)) {}

    trace_sample sample_at(double mu_target) {
        if (mu_target <= 0.0) throw std::invalid_argument("mu-not-positive");
        if (!started_) start(mu_target);
        while (mu_ < mu_target * (1.0 - 1e-15)) {
            const double cap = std::max(mu_ * 0.30, muc_ / 16.0);
            advance(std::min(mu_target, mu_ + cap));
        }
        trace_sample s;
        s.mu = mu_target;
        s.z = z_;
        s.branch = branch_;
        s.residual = last_.residual;
        s.iterations = last_.iterations;
        return s;
    }

private:
    void start(double mu_target) {
        const double mu0 = std::min(mu_target, muc_ / 64.0);
        const cplx germ(zeta_eigenvalue(family_, 1, lambda_), 0.0);
        if (!attempt(mu0, germ)) throw std::runtime_error("trace-start-failed");
        started_ = true;
    }

    sheet_tag sheet_for(double mu) const {
        if (family_ == 1) return sheet_tag::continued_plus;
        return mu < muc_ ? sheet_tag::principal : sheet_tag::continued_plus;
    }

    bool attempt(double mu_next, cplx seed) {
        const two_level_model m{lambda_, mu_next};
        const sheet_tag sheet = sheet_for(mu_next);
        const double cap = 0.2 * (1.0 + std::abs(seed));
        root_result r;
        try {
            r = solve_resonance(m, seed, sheet, 1e-12, 80, cap);
        } catch (const std::exception&) {
            return false;
        }
        if (!r.converged) return false;
        const double jump_tol =
            std::max(5.0 * std::abs(seed - z_) + 1e-9,
                     0.3 * (std::abs(z_) + 1e-3));
        if (started_ && std::abs(r.root - z_) > jump_tol) return false;
        if (r.root.imag() > 1e-10) return false;
        mu_prev_ = mu_;
        z_prev_ = z_;
        mu_ = mu_next;
        z_ = r.root;
        last_ = r;
        branch_ = to_string(sheet);
        return true;
    }

    void advance(double mu_next) {
        double target = mu_next;
        for (int halve = 0; halve <= 6; ++halve) {
            cplx seed = z_;
            if (mu_prev_ >= 0.0 && mu_ > mu_prev_)
                seed = z_ + (z_ - z_prev_) * ((target - mu_) / (mu_ - mu_prev_));
            // branch handoff: leaving the real axis at the critical coupling
            if (family_ == 0 && mu_ < muc_ && target >= muc_)
                seed = cplx(seed.real(), -1e-6);
            if (attempt(target, seed)) return;
            target = 0.5 * (mu_ + target);
        }
        throw std::runtime_error("trace-continuation-failed");
    }

    double lambda_;
    int family_;
    double muc_;
    bool started_ = false;
    double mu_ = -1.0;
    double mu_prev_ = -1.0;
    cplx z_{};
    cplx z_prev_{};
    root_result last_{};
    std::string branch_;
};

}  // namespace

cplx photon_amplitude_psi01(const two_level_model& model, double p) {
    if (model.mu >= mu_critical(model.lambda))
        throw std::runtime_error("mu-above-critical");
    one_exc_tracer tracer(model.lambda, 0);
    const trace_sample s = tracer.sample_at(model.mu);
    return model.lambda * eval_g(p) / (s.z - model.mu * std::abs(p));
}

resonance_trajectory trace_resonance_in_mu(double lambda, int family,
                                           const std::vector<double>& mu_grid) {
    if (family != 0 && family != 1)
        throw std::invalid_argument("family-out-of-range");
    if (mu_grid.empty()) throw std::invalid_argument("mu-grid-empty");
    for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i)
        if (!(mu_grid[i] < mu_grid[i + 1]))
            throw std::invalid_argument("mu-grid-not-increasing");
    if (mu_grid.front() < 0.0) throw std::invalid_argument("mu-negative");

    resonance_trajectory out;
    out.sector = "one";
    out.family = family;
    one_exc_tracer tracer(lambda, family);
    for (double mu : mu_grid) {
        if (mu == 0.0) {
            trace_sample s;
            s.mu = 0.0;
            s.z = cplx(zeta_eigenvalue(family, 1, lambda), 0.0);
            s.branch = family == 0 ? "principal" : "continued_plus";
            out.samples.push_back(std::move(s));
            continue;
        }
        out.samples.push_back(tracer.sample_at(mu));
    }
    return out;
}

resonance_trajectory trace_resonance_along_path(const parameter_path& path,
                                                cplx start, sheet_tag sheet) {
    if (path.waypoints.size() < 2)
        throw std::invalid_argument("path-needs-two-waypoints");
    if (path.samples < 2) throw std::invalid_argument("too-few-samples");

    std::vector<double> cum{0.0};
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        const double dl = path.waypoints[i + 1].first - path.waypoints[i].first;
        const double dm = path.waypoints[i + 1].second - path.waypoints[i].second;
        cum.push_back(cum.back() + std::hypot(dl, dm));
    }
    if (cum.back() == 0.0) throw std::invalid_argument("path-has-zero-length");

    auto params_at = [&](double s) {
        std::size_t leg = 0;
        while (leg + 2 < cum.size() && s > cum[leg + 1]) ++leg;
        const double span = cum[leg + 1] - cum[leg];
        const double t = span > 0.0 ? (s - cum[leg]) / span : 0.0;
        const auto& a = path.waypoints[leg];
        const auto& b = path.waypoints[leg + 1];
        return std::pair<double, double>{a.first + t * (b.first - a.first),
                                         a.second + t * (b.second - a.second)};
    };

    resonance_trajectory out;
    out.sector = "one";
    out.family = -1;

    cplx z = start;
    const int n = path.samples;
    double s_done = 0.0;
    for (int k = 0; k < n; ++k) {
        const double s_k = cum.back() * k / (n - 1);
        // march in sub-steps when a single hop loses the root
        int halvings = 0;
        double s_cur = s_done;
        cplx z_cur = z;
        while (true) {
            const double s_try = (halvings == 0)
                                     ? s_k
                                     : s_cur + (s_k - s_cur) /
                                                   static_cast<double>(1 << halvings);
            const auto [lam, mu] = params_at(s_try);
            const two_level_model m{lam, mu};
            root_result r;
            bool ok = true;
            try {
                r = solve_resonance(m, z_cur, sheet, 1e-12, 80,
                                    0.2 * (1.0 + std::abs(z_cur)));
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok && r.converged &&
                std::abs(r.root - z_cur) <= 0.3 * (std::abs(z_cur) + 1e-3)) {
                const double guard = 1e-4 * (1.0 + mu);
                if (std::abs(r.root) < guard) throw std::runtime_error("pole-approach");
                if (sheet != sheet_tag::principal &&
                    std::abs(r.root + cplx(0.0, mu)) < guard)
                    throw std::runtime_error("pole-approach");
                s_cur = s_try;
                z_cur = r.root;
                if (s_try == s_k) {
                    trace_sample smp;
                    smp.mu = s_k;
                    smp.z = r.root;
                    smp.branch = to_string(sheet);
                    smp.residual = r.residual;
                    smp.iterations = r.iterations;
                    out.samples.push_back(std::move(smp));
                    break;
                }
                if (halvings > 0) --halvings;
            } else {
                if (++halvings > 8)
                    throw std::runtime_error("trace-continuation-failed");
            }
        }
        s_done = s_k;
        z = z_cur;
    }
    return out;
}

}  // namespace atlas
