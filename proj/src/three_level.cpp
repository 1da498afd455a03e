#include "atlas/three_level.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atlas {

namespace {

constexpr double kdegenerate_overlap = 1e-10;
constexpr std::size_t kdimension_cap = 20000;

void validate(const three_level_model& model) {
    if (!(model.e1 > 0.0) || !(model.e2 > model.e1)) {
        throw std::invalid_argument("energy-order-invalid");
    }
    if (model.l01 < 0.0 || model.l12 < 0.0 || model.l02 < 0.0) {
        throw std::invalid_argument("coupling-negative");
    }
    const double tol = 1.0 + 1e-12;
    if (std::abs(model.s0) > tol || std::abs(model.s1) > tol ||
        std::abs(model.s2) > tol) {
        throw std::invalid_argument("overlap-exceeds-unit");
    }
}

bool parallel_modes(const three_level_model& model) {
    return std::abs(model.s1) >= 1.0 - kdegenerate_overlap;
}

// Gram matrix of (f01, f12, f02) from the stored overlaps.
Eigen::Matrix3cd gram_matrix(const three_level_model& model) {
    Eigen::Matrix3cd g;
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    g(2, 2) = 1.0;
    g(0, 1) = model.s1;
    g(1, 0) = std::conj(model.s1);
    g(0, 2) = model.s0;
    g(2, 0) = std::conj(model.s0);
    g(1, 2) = std::conj(model.s2);
    g(2, 1) = model.s2;
    return g;
}

double lower_zeta(const three_level_model& model) {
    return 0.5 * (model.e1 -
                  std::sqrt(model.e1 * model.e1 + 4.0 * model.l01 * model.l01));
}

double upper_zeta(const three_level_model& model) {
    return 0.5 * (model.e1 +
                  std::sqrt(model.e1 * model.e1 + 4.0 * model.l01 * model.l01));
}

double family_zeta(const three_level_model& model, kato_family family) {
    return family == kato_family::lower ? lower_zeta(model) : upper_zeta(model);
}

// Quintic factor of the sector characteristic polynomial, coefficients in
// ascending degree order.
std::array<double, 6> sector_quintic(const three_level_model& model) {
    const double e1 = model.e1;
    const double e2 = model.e2;
    const double l01sq = model.l01 * model.l01;
    const double l12sq = model.l12 * model.l12;
    const double s1sq = std::norm(model.s1);
    const std::array<double, 3> a = {0.0, -e1, 1.0};
    const std::array<double, 4> b = {3.0 * l01sq * e2,
                                     e1 * e2 - 3.0 * l01sq - l12sq,
                                     -(e1 + e2), 1.0};
    std::array<double, 6> q{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            q[i + j] += a[i] * b[j];
        }
    }
    q[0] += -2.0 * e2 * l01sq * l01sq;
    q[1] += l01sq * (2.0 * l01sq + (2.0 - s1sq) * l12sq);
    return q;
}

cplx horner(const std::array<double, 6>& coeff, cplx z) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = coeff.size(); i-- > 0;) {
        acc = acc * z + coeff[i];
    }
    return acc;
}

// Second-order root approximations of the sector quintic. The two roots near
// zero and the two near e1 come from their local quadratic factors; dropping
// the quartic coupling terms there would misplace roots that are themselves
// of quadratic size.
std::array<double, 5> resolved_second_order(const three_level_model& model) {
    const double e1 = model.e1;
    const double e2 = model.e2;
    const double l01sq = model.l01 * model.l01;
    const double l12sq = model.l12 * model.l12;
    const double a = l01sq / e1;
    const double split = 3.0 * a + l12sq / (e1 - e2);
    const double product =
        (e1 * l01sq * (2.0 * l01sq + (2.0 - std::norm(model.s1)) * l12sq) -
         2.0 * e2 * l01sq * l01sq) /
        (e1 * e1 * (e1 - e2));
    const double disc = std::sqrt(std::max(split * split - 4.0 * product, 0.0));
    return {-a, -2.0 * a, e1 + 0.5 * (split - disc), e1 + 0.5 * (split + disc),
            e2 + l12sq / (e2 - e1)};
}

double factorial(int n) {
    double acc = 1.0;
    for (int k = 2; k <= n; ++k) {
        acc *= k;
    }
    return acc;
}

double kato_coefficient(const three_level_model& model, const mode_frame& frame,
                        double zeta, int n) {
    const double l01sq = model.l01 * model.l01;
    const double l12sq = model.l12 * model.l12;
    if (std::abs(zeta) <= 1e-12 * (1.0 + model.e1)) {
        throw std::runtime_error("degenerate-denominator");
    }
    const double den = l12sq * zeta + l01sq * (zeta - model.e2);
    const double den_scale =
        l12sq * std::abs(zeta) + l01sq * (std::abs(zeta) + model.e2);
    if (std::abs(den) <= 1e-12 * den_scale || den_scale == 0.0) {
        throw std::runtime_error("degenerate-denominator");
    }
    const double overlap_sq = std::norm(frame.f02_g1);
    double numerator = n * l01sq * l01sq * overlap_sq;
    if (frame.degenerate) {
        numerator =
            l01sq * l01sq * (n * overlap_sq + std::norm(model.s0));
    }
    return numerator / (zeta * zeta * den);
}

struct kato_workspace {
    truncated_fock fock;
    double zeta = 0.0;
    Eigen::MatrixXcd h0;
    Eigen::MatrixXcd v;  // unit-strength 0<->2 coupling term
    Eigen::MatrixXcd family;  // columns: dressed vectors psi_0 .. psi_{K-1}
    Eigen::MatrixXcd complement;
    Eigen::FullPivLU<Eigen::MatrixXcd> shifted_lu;  // of W^* (zeta - h0) W
};

Eigen::MatrixXcd block_promote(const Eigen::MatrixXcd& photon_op,
                               Eigen::Index nb) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(3 * nb, 3 * nb);
    for (int a = 0; a < 3; ++a) {
        full.block(a * nb, a * nb, nb, nb) = photon_op;
    }
    return full;
}

void add_coupling(Eigen::MatrixXcd& h, Eigen::Index nb, int upper_level,
                  int lower_level, double strength,
                  const Eigen::MatrixXcd& creation) {
    h.block(lower_level * nb, upper_level * nb, nb, nb) += strength * creation;
    h.block(upper_level * nb, lower_level * nb, nb, nb) +=
        strength * creation.adjoint();
}

Eigen::MatrixXcd assemble_hamiltonian(const three_level_model& model,
                                      const mode_frame& frame,
                                      const truncated_fock& fock,
                                      bool include_v) {
    const auto nb = static_cast<Eigen::Index>(fock.size());
    const Eigen::MatrixXcd c01 = creation_matrix(fock, frame.f01);
    const Eigen::MatrixXcd c12 = creation_matrix(fock, frame.f12);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3 * nb, 3 * nb);
    h.block(nb, nb, nb, nb) =
        model.e1 * Eigen::MatrixXcd::Identity(nb, nb);
    h.block(2 * nb, 2 * nb, nb, nb) =
        model.e2 * Eigen::MatrixXcd::Identity(nb, nb);
    add_coupling(h, nb, 1, 0, model.l01, c01);
    add_coupling(h, nb, 2, 1, model.l12, c12);
    if (include_v) {
        const Eigen::MatrixXcd c02 = creation_matrix(fock, frame.f02);
        add_coupling(h, nb, 2, 0, model.l02, c02);
    }
    return h;
}

// Builds the truncated space, bare Hamiltonian, unit-strength perturbation,
// and the dressed eigenvector family for the chosen branch. Leaves the
// complement machinery empty.
kato_workspace make_family_workspace(const three_level_model& model,
                                     kato_family family, int max_total) {
    validate(model);
    const mode_frame frame = build_mode_frame(model);
    kato_workspace ws;
    ws.zeta = family_zeta(model, family);
    if (std::abs(ws.zeta) <= 1e-12 * (1.0 + model.e1)) {
        throw std::runtime_error("degenerate-denominator");
    }
    ws.fock = make_truncated_fock(frame.dimension, max_total);
    const auto nb = static_cast<Eigen::Index>(ws.fock.size());
    const Eigen::Index dim = 3 * nb;
    if (static_cast<std::size_t>(dim) > kdimension_cap) {
        throw std::runtime_error("dimension-overflow");
    }
    ws.h0 = assemble_hamiltonian(model, frame, ws.fock, false);
    {
        const Eigen::MatrixXcd c02 = creation_matrix(ws.fock, frame.f02);
        ws.v = Eigen::MatrixXcd::Zero(dim, dim);
        add_coupling(ws.v, nb, 2, 0, 1.0, c02);
    }

    const auto vac = static_cast<Eigen::Index>(ws.fock.index.at({0, 0, 0}));
    const Eigen::MatrixXcd c01 = creation_matrix(ws.fock, frame.f01);
    Eigen::VectorXcd seed = Eigen::VectorXcd::Zero(dim);
    seed(nb + vac) = 1.0;
    seed.segment(0, nb) = (model.l01 / ws.zeta) * c01.col(vac);
    seed /= seed.norm();

    std::array<cplx, 3> g1_coeffs{cplx{0.0, 0.0}, cplx{0.0, 0.0},
                                  cplx{0.0, 0.0}};
    g1_coeffs[frame.degenerate ? 1 : 2] = 1.0;
    const Eigen::MatrixXcd raise_g1 =
        block_promote(creation_matrix(ws.fock, g1_coeffs), nb);

    const int n_family = max_total;  // k + 1 photons <= max_total keeps exact
    ws.family.resize(dim, n_family);
    Eigen::VectorXcd current = seed;
    for (int k = 0; k < n_family; ++k) {
        if (k > 0) {
            current = (raise_g1 * current) / std::sqrt(double(k));
        }
        ws.family.col(k) = current / current.norm();
    }
    return ws;
}

kato_workspace make_kato_workspace(const three_level_model& model,
                                   kato_family family, int n, int max_total) {
    if (n < 0) {
        throw std::invalid_argument("photon-count-negative");
    }
    if (max_total < n + 3) {
        throw std::invalid_argument("truncation-below-minimum");
    }
    kato_workspace ws = make_family_workspace(model, family, max_total);
    const Eigen::Index dim = ws.h0.rows();
    const Eigen::Index n_family = ws.family.cols();

    Eigen::MatrixXcd padded(dim, n_family + dim);
    padded << ws.family, Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(padded);
    const Eigen::MatrixXcd q =
        qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
    ws.complement = q.rightCols(dim - n_family);

    const Eigen::MatrixXcd shifted =
        ws.complement.adjoint() *
        (ws.zeta * Eigen::MatrixXcd::Identity(dim, dim) - ws.h0) *
        ws.complement;
    ws.shifted_lu.compute(shifted);
    if (!ws.shifted_lu.isInvertible() || ws.shifted_lu.rcond() < 1e-12) {
        throw std::runtime_error("pseudo-inverse-ill-conditioned");
    }
    return ws;
}

// Pseudo-resolvent of (zeta - h0) restricted to the complement of the
// dressed family.
Eigen::VectorXcd apply_resolvent(const kato_workspace& ws,
                                 const Eigen::VectorXcd& x) {
    return ws.complement * ws.shifted_lu.solve(ws.complement.adjoint() * x);
}

double second_order_value(const three_level_model& model,
                          const kato_workspace& ws, int n) {
    const Eigen::VectorXcd v_psi = ws.v * ws.family.col(n);
    const Eigen::VectorXcd y = apply_resolvent(ws, v_psi);
    return ws.zeta + model.l02 * model.l02 * v_psi.dot(y).real();
}

}  // namespace

mode_frame build_mode_frame(const three_level_model& model) {
    validate(model);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> gram_eigen(
        gram_matrix(model), Eigen::EigenvaluesOnly);
    if (gram_eigen.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("gram-not-psd");
    }
    int rank = 0;
    for (int i = 0; i < 3; ++i) {
        if (gram_eigen.eigenvalues()(i) > 1e-10) {
            ++rank;
        }
    }
    if (rank <= 1) {
        throw std::runtime_error("all-modes-collinear");
    }

    mode_frame frame;
    frame.f01 = {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    if (parallel_modes(model)) {
        const double resid_sq =
            std::max(1.0 - std::norm(model.s0), 0.0);
        const double resid = std::sqrt(resid_sq);
        frame.degenerate = true;
        frame.dimension = 2;
        frame.f12 = {model.s1, cplx{0.0, 0.0}, cplx{0.0, 0.0}};
        frame.f02 = {model.s0, resid, cplx{0.0, 0.0}};
        frame.g1 = {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
        frame.f02_g1 = resid;
        return frame;
    }

    const double t = std::sqrt(1.0 - std::norm(model.s1));
    const cplx b = (std::conj(model.s2) - std::conj(model.s1) * model.s0) / t;
    const double c_sq = 1.0 - std::norm(model.s0) - std::norm(b);
    if (c_sq < -1e-10) {
        throw std::invalid_argument("gram-not-psd");
    }
    const double c = std::sqrt(std::max(c_sq, 0.0));
    frame.degenerate = false;
    frame.dimension = 3;
    frame.f12 = {model.s1, t, cplx{0.0, 0.0}};
    frame.f02 = {model.s0, b, c};
    frame.g1 = {cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    frame.f02_g1 = c;
    return frame;
}

std::vector<prop41_entry> prop41_spectrum(const three_level_model& model) {
    validate(model);
    const double lower = lower_zeta(model);
    const double upper = upper_zeta(model);
    std::vector<prop41_entry> entries;
    if (model.l01 == 0.0) {
        entries.push_back({lower, 0.0, -1.0});
    } else {
        const double norm_low =
            1.0 / std::sqrt(1.0 + model.l01 * model.l01 / (lower * lower));
        entries.push_back({lower, norm_low, norm_low * model.l01 / lower});
    }
    if (!parallel_modes(model)) {
        entries.push_back({0.0, 0.0, 1.0});
    }
    const double norm_up =
        1.0 / std::sqrt(1.0 + model.l01 * model.l01 / (upper * upper));
    entries.push_back({upper, norm_up, norm_up * model.l01 / upper});
    return entries;
}

Eigen::MatrixXcd b2_matrix(const three_level_model& model) {
    validate(model);
    if (parallel_modes(model)) {
        throw std::runtime_error("degenerate-frame");
    }
    const double r2 = std::sqrt(2.0);
    const cplx s1 = model.s1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
    m(0, 0) = model.e2;
    m(0, 1) = model.l12;
    m(0, 2) = s1 * model.l12;
    m(1, 0) = model.l12;
    m(1, 1) = model.e1;
    m(1, 3) = model.l01 / r2;
    m(1, 5) = r2 * s1 * model.l01;
    m(2, 2) = model.e1;
    m(2, 3) = s1 * model.l01 / r2;
    m(2, 4) = r2 * model.l01;
    m(3, 1) = r2 * model.l01;
    m(4, 2) = r2 * model.l01;
    return m;
}

cplx b2_charpoly(const three_level_model& model, cplx zeta) {
    validate(model);
    return zeta * horner(sector_quintic(model), zeta);
}

std::vector<double> b2_spectrum(const three_level_model& model) {
    validate(model);
    if (parallel_modes(model)) {
        throw std::runtime_error("degenerate-frame");
    }
    std::vector<double> roots;
    if (model.l01 == 0.0) {
        // The quintic factors exactly: two zero roots, e1, and the pair
        // mixing e1 and e2 through the 1<->2 coupling.
        const double tr = model.e1 + model.e2;
        const double gap =
            std::sqrt((model.e1 - model.e2) * (model.e1 - model.e2) +
                      4.0 * model.l12 * model.l12);
        roots = {0.0, 0.0, model.e1, 0.5 * (tr - gap), 0.5 * (tr + gap)};
    } else {
        const auto coeff = sector_quintic(model);
        double scale = 0.0;
        for (double c : coeff) {
            scale += std::abs(c);
        }
        const complex_fn poly = [&coeff](cplx z) { return horner(coeff, z); };
        const double tol = 1e-14 * (1.0 + scale);
        for (double seed : resolved_second_order(model)) {
            const root_result found =
                find_root_complex(poly, cplx{seed, 0.0}, tol, 300);
            if (!found.converged) {
                throw std::runtime_error("root-isolation-failure");
            }
            roots.push_back(found.root.real());
        }
        std::sort(roots.begin(), roots.end());
        const double min_gap = 1e-10 * std::max(1.0, model.e2);
        for (std::size_t i = 1; i < roots.size(); ++i) {
            if (roots[i] - roots[i - 1] < min_gap) {
                throw std::runtime_error("root-isolation-failure");
            }
        }
    }
    roots.push_back(0.0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> b2_second_order(const three_level_model& model,
                                    bool as_printed) {
    validate(model);
    std::vector<double> values;
    if (as_printed) {
        const double a = model.l01 * model.l01 / model.e1;
        const double l12sq = model.l12 * model.l12;
        values = {0.0, -3.0 * a, model.e1,
                  model.e1 + 3.0 * a + l12sq / (model.e1 - model.e2),
                  model.e2 + l12sq / (model.e2 - model.e1)};
    } else {
        const auto resolved = resolved_second_order(model);
        values.assign(resolved.begin(), resolved.end());
    }
    std::sort(values.begin(), values.end());
    return values;
}

truncated_fock make_truncated_fock(int n_modes, int max_total) {
    if (n_modes < 1 || n_modes > 3) {
        throw std::invalid_argument("mode-count-invalid");
    }
    if (max_total < 0) {
        throw std::invalid_argument("truncation-below-minimum");
    }
    truncated_fock fock;
    fock.n_modes = n_modes;
    fock.max_total = max_total;
    for (int total = 0; total <= max_total; ++total) {
        if (n_modes == 1) {
            fock.states.push_back({total, 0, 0});
        } else if (n_modes == 2) {
            for (int first = 0; first <= total; ++first) {
                fock.states.push_back({first, total - first, 0});
            }
        } else {
            for (int first = 0; first <= total; ++first) {
                for (int second = 0; second <= total - first; ++second) {
                    fock.states.push_back(
                        {first, second, total - first - second});
                }
            }
        }
        if (fock.states.size() > kdimension_cap) {
            throw std::runtime_error("dimension-overflow");
        }
    }
    for (std::size_t i = 0; i < fock.states.size(); ++i) {
        fock.index.emplace(fock.states[i], i);
    }
    return fock;
}

Eigen::MatrixXcd creation_matrix(const truncated_fock& fock,
                                 const std::array<cplx, 3>& coeffs) {
    for (int m = fock.n_modes; m < 3; ++m) {
        if (coeffs[m] != cplx{0.0, 0.0}) {
            throw std::invalid_argument("mode-count-invalid");
        }
    }
    const auto nb = static_cast<Eigen::Index>(fock.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nb, nb);
    for (std::size_t i = 0; i < fock.states.size(); ++i) {
        const auto& occ = fock.states[i];
        if (occ[0] + occ[1] + occ[2] == fock.max_total) {
            continue;
        }
        for (int m = 0; m < fock.n_modes; ++m) {
            if (coeffs[m] == cplx{0.0, 0.0}) {
                continue;
            }
            std::array<int, 3> raised = occ;
            ++raised[m];
            const auto j =
                static_cast<Eigen::Index>(fock.index.at(raised));
            a(j, static_cast<Eigen::Index>(i)) +=
                coeffs[m] * std::sqrt(double(occ[m] + 1));
        }
    }
    return a;
}

Eigen::MatrixXcd build_truncated_hamiltonian(const three_level_model& model,
                                             int max_total, bool include_v) {
    validate(model);
    if (max_total < 1) {
        throw std::invalid_argument("truncation-below-minimum");
    }
    const mode_frame frame = build_mode_frame(model);
    const truncated_fock fock =
        make_truncated_fock(frame.dimension, max_total);
    if (3 * fock.size() > kdimension_cap) {
        throw std::runtime_error("dimension-overflow");
    }
    return assemble_hamiltonian(model, frame, fock, include_v);
}

std::vector<double> brute_spectrum(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("non-hermitian-input");
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("non-hermitian-input");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        matrix, Eigen::EigenvaluesOnly);
    const auto& values = solver.eigenvalues();
    return std::vector<double>(values.data(), values.data() + values.size());
}

double kato_A(const three_level_model& model, int n) {
    validate(model);
    if (n < 0) {
        throw std::invalid_argument("photon-count-negative");
    }
    const mode_frame frame = build_mode_frame(model);
    return kato_coefficient(model, frame, lower_zeta(model), n);
}

double kato_z2(const three_level_model& model, kato_family family, int n,
               bool printed_weight) {
    validate(model);
    if (n < 0) {
        throw std::invalid_argument("photon-count-negative");
    }
    const mode_frame frame = build_mode_frame(model);
    const double zeta = family_zeta(model, family);
    const double coefficient = kato_coefficient(model, frame, zeta, n);
    const double weight = printed_weight ? factorial(n) : 1.0;
    const double reduction =
        1.0 / (1.0 + weight * model.l01 * model.l01 / (zeta * zeta));
    return zeta + model.l02 * model.l02 * reduction * coefficient;
}

namespace {

// Workspace plus the N -> N+1 truncation stability guard shared by the
// second-order eigenvalue and eigenvector routines.
kato_workspace make_stable_workspace(const three_level_model& model,
                                     kato_family family, int n, int max_total,
                                     double* value_out) {
    kato_workspace ws = make_kato_workspace(model, family, n, max_total);
    const double value = second_order_value(model, ws, n);
    const kato_workspace ws_next =
        make_kato_workspace(model, family, n, max_total + 1);
    if (std::abs(second_order_value(model, ws_next, n) - value) > 1e-9) {
        throw std::runtime_error("truncation-insufficient");
    }
    if (value_out != nullptr) {
        *value_out = value;
    }
    return ws;
}

}  // namespace

double kato_matrix_second_order(const three_level_model& model,
                                kato_family family, int n, int max_total) {
    double value = 0.0;
    make_stable_workspace(model, family, n, max_total, &value);
    return value;
}

Eigen::VectorXcd kato_vector_second_order(const three_level_model& model,
                                          kato_family family, int n,
                                          int max_total) {
    const kato_workspace ws =
        make_stable_workspace(model, family, n, max_total, nullptr);
    const Eigen::VectorXcd psi = ws.family.col(n);
    const Eigen::VectorXcd v_psi = ws.v * psi;
    const Eigen::VectorXcd y = apply_resolvent(ws, v_psi);
    const Eigen::VectorXcd twice = ws.complement *
                                   ws.shifted_lu.solve(ws.shifted_lu.solve(
                                       ws.complement.adjoint() * v_psi));
    const Eigen::VectorXcd family_part =
        ws.family * (ws.family.adjoint() * (ws.v * twice));
    const Eigen::VectorXcd chained = apply_resolvent(ws, ws.v * y);
    const double l02 = model.l02;
    return psi + l02 * y + (l02 * l02) * (chained - family_part);
}

Eigen::VectorXcd dressed_family_vector(const three_level_model& model,
                                       kato_family family, int n,
                                       int max_total) {
    if (n < 0) {
        throw std::invalid_argument("photon-count-negative");
    }
    if (max_total < n + 1) {
        throw std::invalid_argument("truncation-below-minimum");
    }
    const kato_workspace ws = make_family_workspace(model, family, max_total);
    return ws.family.col(n);
}

}  // namespace atlas
