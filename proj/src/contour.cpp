#include "atlas/contour.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace atlas {

namespace {

// Kronrod 15-point abscissae on [-1,1] (positive half) with the embedded
// Gauss 7-point rule on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct panel {
    double t0, t1;       // parameter range in [0,1]
    cplx value;          // GK15 estimate
    double error;        // |GK15 - G7|
    long seq;            // creation order, ties broken deterministically
};

struct panel_order {
    bool operator()(const panel& a, const panel& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.seq > b.seq;
    }
};

// One GK15(7) pass over the parametrized integrand on [t0,t1].
panel evaluate_panel(const std::function<cplx(double)>& f, double t0,
                     double t1, long seq) {
    const double c = 0.5 * (t0 + t1);
    const double h = 0.5 * (t1 - t0);
    cplx sk = kWgk[7] * f(c);
    cplx sg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const cplx fa = f(c - h * kXgk[j]);
        const cplx fb = f(c + h * kXgk[j]);
        sk += kWgk[j] * (fa + fb);
        if (j % 2 == 1) sg += kWg[j / 2] * (fa + fb);
    }
    panel p;
    p.t0 = t0;
    p.t1 = t1;
    p.value = h * sk;
    p.error = std::abs(h * (sk - sg));
    p.seq = seq;
    return p;
}

// Globally adaptive bisection driven by a max-error heap.
cplx adaptive_quadrature(const std::function<cplx(double)>& f,
                         const quadrature_settings& settings) {
    long seq = 0;
    std::priority_queue<panel, std::vector<panel>, panel_order> heap;
    heap.push(evaluate_panel(f, 0.0, 1.0, seq++));
    cplx total = heap.top().value;
    double err = heap.top().error;
    int used = 1;
    while (true) {
        const double target =
            std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
        if (err <= target) return total;
        if (used >= settings.max_subdivisions)
            throw std::runtime_error("quadrature-tolerance-not-met");
        panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.t0 + worst.t1);
        panel left = evaluate_panel(f, worst.t0, mid, seq++);
        panel right = evaluate_panel(f, mid, worst.t1, seq++);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++used;
    }
}

}  // namespace

cplx integrate_segment(const complex_fn& f, cplx a, cplx b,
                       const quadrature_settings& settings) {
    if (a == b) return cplx(0.0, 0.0);
    const cplx d = b - a;
    return adaptive_quadrature(
        [&](double t) { return f(a + t * d) * d; }, settings);
}

cplx integrate_path(const complex_fn& f, const polyline_path& path,
                    const quadrature_settings& settings) {
    if (path.vertices.size() < 2)
        throw std::invalid_argument("path-needs-two-vertices");
    cplx total(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        total += integrate_segment(f, path.vertices[i], path.vertices[i + 1],
                                   settings);
    return total;
}

cplx integrate_ray(const complex_fn& f, double a,
                   const quadrature_settings& settings) {
    return adaptive_quadrature(
        [&, a](double t) {
            if (t >= 1.0) return cplx(0.0, 0.0);
            const double u = 1.0 - t;
            const double q = a + t / u;
            return f(cplx(q, 0.0)) / (u * u);
        },
        settings);
}

namespace {

int count_crossings(const polyline_path& path, cplx anchor, int depth) {
    const double re0 = anchor.real();
    const double im0 = anchor.imag();
    for (const cplx& v : path.vertices) {
        if (std::abs(v.imag() - im0) < 1e-14 && v.real() >= re0) {
            if (depth >= 4)
                throw std::runtime_error("ray-crossing-degenerate");
            return count_crossings(path, anchor - cplx(0.0, 1e-12),
                                   depth + 1);
        }
    }
    int count = 0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        const cplx a = path.vertices[i];
        const cplx b = path.vertices[i + 1];
        const double ya = a.imag() - im0;
        const double yb = b.imag() - im0;
        if ((ya > 0.0) == (yb > 0.0)) continue;
        const double t = ya / (ya - yb);
        const double x = a.real() + t * (b.real() - a.real());
        if (x > re0) count += (ya > 0.0) ? 1 : -1;
    }
    return count;
}

}  // namespace

int crossings_of_shifted_ray(const polyline_path& path, cplx anchor) {
    if (path.vertices.size() < 2)
        throw std::invalid_argument("path-needs-two-vertices");
    return count_crossings(path, anchor, 0);
}

namespace {

// Trial evaluation that treats exceptions (cut or pole guards in the
// objective) like an out-of-domain step: the caller backtracks.
bool try_eval(const complex_fn& f, cplx z, cplx& out) {
    try {
        out = f(z);
    } catch (const std::exception&) {
        return false;
    }
    return std::isfinite(out.real()) && std::isfinite(out.imag());
}

}  // namespace

root_result find_root_complex(const complex_fn& f, cplx seed, double tol,
                              int max_iterations, double step_cap) {
    root_result out;
    cplx z = seed;
    cplx fz = f(z);
    out.root = z;
    out.residual = std::abs(fz);
    for (int it = 1; it <= max_iterations; ++it) {
        out.iterations = it;
        if (std::abs(fz) <= tol) {
            out.converged = true;
            out.iterations = it - 1;
            break;
        }
        const double h = 1e-7 * (1.0 + std::abs(z));
        cplx fa, fb, fp(0.0, 0.0);
        if (try_eval(f, z + h, fa) && try_eval(f, z - h, fb)) {
            fp = (fa - fb) / (2.0 * h);
        }
        if (std::abs(fp) == 0.0) {
            // fall back to a one-sided difference along a rotated direction
            const cplx hd = h * cplx(0.7071067811865476, 0.7071067811865476);
            cplx fd;
            if (!try_eval(f, z + hd, fd)) break;
            fp = (fd - fz) / hd;
            if (std::abs(fp) == 0.0) break;
        }
        cplx dz = -fz / fp;
        if (step_cap > 0.0 && std::abs(dz) > step_cap)
            dz *= step_cap / std::abs(dz);
        cplx zn = z;
        cplx fn = fz;
        bool improved = false;
        for (int back = 0; back < 12; ++back) {
            const cplx cand = z + dz;
            cplx fc;
            if (try_eval(f, cand, fc) && std::abs(fc) < std::abs(fz)) {
                zn = cand;
                fn = fc;
                improved = true;
                break;
            }
            dz *= 0.5;
        }
        if (!improved) break;
        z = zn;
        fz = fn;
        out.root = z;
        out.residual = std::abs(fz);
    }
    if (!out.converged && std::abs(fz) <= tol) {
        out.converged = true;
        out.root = z;
        out.residual = std::abs(fz);
    }
    return out;
}

polyline_path gamma0_path(double base, cplx z, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps-not-positive");
    polyline_path p;
    p.vertices = {cplx(base, 0.0), cplx(base, eps), cplx(z.real(), eps), z};
    return p;
}

}  // namespace atlas
