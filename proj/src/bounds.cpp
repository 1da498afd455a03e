#include "atlas/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace atlas {

namespace {

void check_params(const two_level_model& m) {
    if (m.lambda < 0.0) throw std::invalid_argument("lambda-negative");
    if (m.mu < 0.0) throw std::invalid_argument("mu-negative");
}

// For real z every denominator below is real, so the integration quadrant
// contains a genuine pole unless z is negative and the atom factor stays
// away from its root along the whole sweep. f is increasing through that
// root, hence f(z) < 0 is exactly the safe side.
void check_real_point(const two_level_model& m, cplx z) {
    if (z.imag() != 0.0) return;
    if (z.real() >= 0.0) throw std::runtime_error("singular-integrand");
    if (eval_f(m, z, sheet_tag::principal).real() >= 0.0)
        throw std::runtime_error("singular-integrand");
}

// The quadrature budget error gets its own name here so callers can tell a
// bound evaluation that failed to converge from other runtime faults.
template <typename Fn>
auto run_guarded(const Fn& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::runtime_error& err) {
        if (std::string_view(err.what()) == "quadrature-tolerance-not-met")
            throw std::runtime_error("tolerance-not-met");
        throw;
    }
}

// Panel edges shared by both axes: the integrands peak opposite the pair and
// atom denominators, all of which sit at multiples of |z|/mu.
std::vector<double> quadrant_splits(cplx w) {
    const double a = std::abs(w);
    std::vector<double> pts{0.0, 1.0, 0.5 * a, a, 2.0 * a};
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts)
        if (out.empty() || p > out.back() + 1e-12 * (1.0 + p))
            out.push_back(p);
    return out;
}

cplx integrate_axis(const complex_fn& f, const std::vector<double>& splits,
                    const quadrature_settings& qs) {
    cplx total(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < splits.size(); ++i)
        total += integrate_segment(f, splits[i], splits[i + 1], qs);
    total += integrate_ray(f, splits.back(), qs);
    return total;
}

// Nested adaptive quadrature over [0, inf)^2. The inner sweep runs a decade
// tighter than the outer one so its error stays below the outer estimate;
// panels are summed in a fixed order, which keeps results deterministic.
cplx integrate_quadrant(const std::function<cplx(double, double)>& f,
                        const std::vector<double>& splits,
                        const quadrature_settings& outer) {
    quadrature_settings inner = outer;
    inner.abs_tol *= 0.1;
    inner.rel_tol *= 0.1;
    const auto outer_fn = [&](cplx p) {
        const auto inner_fn = [&](cplx q) { return f(p.real(), q.real()); };
        return integrate_axis(inner_fn, splits, inner);
    };
    return integrate_axis(outer_fn, splits, outer);
}

// Shared magnitude of c2 entering the shift estimate: the signed value on the
// real axis (positive at regular points), the absolute-integrand value at
// complex points where only a majorant makes sense.
double c2_magnitude(const two_level_model& m, cplx z,
                    const quadrature_settings& settings) {
    if (z.imag() == 0.0) return eval_C2(m, z, false, settings).real();
    return eval_C2(m, z, true, settings).real();
}

}  // namespace

cplx eval_C2(const two_level_model& model, cplx z, bool absolute,
             const quadrature_settings& settings) {
    check_params(model);
    if (model.lambda == 0.0) return cplx(0.0, 0.0);
    // second-order term carries (lambda^2/mu)^2 against an integrand support
    // shrinking like mu^3, so the zero-dispersion limit vanishes
    if (model.mu == 0.0) return cplx(0.0, 0.0);
    check_real_point(model, z);
    const double mu = model.mu;
    const double ratio = model.lambda * model.lambda / mu;
    const cplx w = z / mu;
    // the constant lives inside the integrand so the relative quadrature
    // tolerance applies to the reported quantity, not to a raw integral that
    // can sit below the absolute floor
    const double scale = 4.0 * ratio * ratio;
    const auto integrand = [&](double p, double q) -> cplx {
        const cplx fp = eval_f(model, z - mu * p, sheet_tag::principal);
        const cplx fq = eval_f(model, z - mu * q, sheet_tag::principal);
        const double d = p - q;
        const cplx pair = w - p - q;
        const cplx val = scale * eval_g2(p) * eval_g2(q) * (d * d) /
                         (fp * fq * (w - 2.0 * p) * (w - 2.0 * q) *
                          (pair * pair));
        return absolute ? cplx(std::abs(val), 0.0) : val;
    };
    return run_guarded([&] {
        return integrate_quadrant(integrand, quadrant_splits(w), settings);
    });
}

double eval_M3(const two_level_model& model, cplx z,
               const quadrature_settings& settings) {
    check_params(model);
    if (model.lambda == 0.0) return 0.0;
    if (model.mu == 0.0) return 0.0;
    check_real_point(model, z);
    const double mu = model.mu;
    const double ratio = model.lambda * model.lambda / mu;
    const cplx w = z / mu;
    const double scale = 4.0 * ratio * ratio * ratio * 4.0;
    const auto integrand = [&](double p, double q) -> cplx {
        const double fp = std::abs(eval_f(model, z - mu * p, sheet_tag::principal));
        const double fq = std::abs(eval_f(model, z - mu * q, sheet_tag::principal));
        const double d = (p - q) * (p - q);
        const double v = std::sqrt(eval_g2(p) * eval_g2(q)) *
                         std::pow((1.0 + p) * (1.0 + q), 0.25) * d /
                         (std::sqrt(fp * fq) *
                          std::sqrt(std::abs(w - 2.0 * p) * std::abs(w - 2.0 * q)) *
                          std::norm(w - p - q));
        return cplx(scale * v * v * v, 0.0);
    };
    const cplx integral = run_guarded([&] {
        return integrate_quadrant(integrand, quadrant_splits(w), settings);
    });
    return integral.real();
}

double eval_M4(const two_level_model& model, cplx z,
               const quadrature_settings& settings) {
    check_params(model);
    if (model.lambda == 0.0) return 0.0;
    if (model.mu == 0.0) return 0.0;
    check_real_point(model, z);
    const double mu = model.mu;
    const double ratio = model.lambda * model.lambda / mu;
    const cplx w = z / mu;
    const double r2 = ratio * ratio;
    const double scale = 16.0 * r2 * r2 * 4.0;
    const auto integrand = [&](double p, double q) -> cplx {
        const double fp = std::abs(eval_f(model, z - mu * p, sheet_tag::principal));
        const double fq = std::abs(eval_f(model, z - mu * q, sheet_tag::principal));
        const double d = (p - q) * (p - q);
        const double v = std::cbrt(eval_g2(p) * eval_g2(q)) *
                         std::pow((1.0 + p) * (1.0 + q), 0.25) * d /
                         (std::cbrt(fp * fq) *
                          std::cbrt(std::abs(w - 2.0 * p) * std::abs(w - 2.0 * q)) *
                          std::norm(w - p - q));
        const double v3 = v * v * v;
        return cplx(scale * v3 * v3, 0.0);
    };
    const cplx integral = run_guarded([&] {
        return integrate_quadrant(integrand, quadrant_splits(w), settings);
    });
    return integral.real();
}

cplx eval_dzC1(const two_level_model& model, cplx z,
               const quadrature_settings& settings) {
    check_params(model);
    const double l2 = model.lambda * model.lambda;
    if (model.lambda == 0.0) return cplx(0.0, 0.0);
    if (model.mu == 0.0) {
        const cplx den = z * z - z - l2;
        if (std::abs(den) <= 1e-13 * std::max(1.0, std::norm(z)))
            throw std::runtime_error("singular-integrand");
        return -l2 * (2.0 * z - 1.0) / (den * den);
    }
    check_real_point(model, z);
    const double mu = model.mu;
    const auto integrand = [&](cplx pc) -> cplx {
        const double p = pc.real();
        const cplx fv = eval_f(model, z - mu * p, sheet_tag::principal);
        const cplx fd = eval_f_derivative(model, z - mu * p, sheet_tag::principal);
        const cplx pair = z - 2.0 * mu * p;
        return eval_g2(p) *
               (1.0 / (pair * pair * fv) + fd / (pair * fv * fv));
    };
    return run_guarded([&] {
        return -2.0 * l2 * integrate_axis(integrand, quadrant_splits(z / mu),
                                          settings);
    });
}

double correction_estimate(const two_level_model& model, cplx z0,
                           const quadrature_settings& settings) {
    check_params(model);
    if (model.lambda == 0.0) return 0.0;
    const double c2 = c2_magnitude(model, z0, settings);
    const double m3 = eval_M3(model, z0, settings);
    const double dz = std::abs(eval_dzC1(model, z0, settings));
    if (dz == 0.0) throw std::runtime_error("singular-integrand");
    return (0.5 * c2 + m3 / 6.0) / dz;
}

bound_report make_bound_report(const two_level_model& model, cplx z,
                               const quadrature_settings& settings) {
    check_params(model);
    bound_report report;
    report.note =
        "shift estimate keeps the first-order term only: z-variation of the "
        "higher coefficients is dropped and orders three and four enter "
        "through majorants";
    if (model.lambda == 0.0) return report;
    report.c2 = c2_magnitude(model, z, settings);
    report.m3 = eval_M3(model, z, settings);
    report.m4 = eval_M4(model, z, settings);
    report.dz_c1 = std::abs(eval_dzC1(model, z, settings));
    report.correction_magnitude =
        (0.5 * report.c2 + report.m3 / 6.0) / report.dz_c1;
    return report;
}

}  // namespace atlas
