#pragma once

#include <array>
#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "atlas/contour.hpp"

namespace atlas {

// Three-level atom coupled to three photon modes at zero photon energy.
// Atom levels are e0 = 0 < e1 < e2; transition i<->j carries coupling
// strength lij and mode function fij. Only the pairwise overlaps of the mode
// functions enter the spectrum:
//   s0 = (f01, f02), s1 = (f01, f12), s2 = (f02, f12),
// inner products antilinear in the first slot.
struct three_level_model {
    double e1 = 1.0;
    double e2 = 2.0;
    double l01 = 0.0;
    double l12 = 0.0;
    double l02 = 0.0;
    cplx s0{0.0, 0.0};
    cplx s1{0.0, 0.0};
    cplx s2{0.0, 0.0};
};

// Orthonormal frame spanning the three mode functions, produced by
// Gram-Schmidt on (f01, f12, f02) in that order. Coordinates of each mode
// function and of g1 (the unit vector orthogonal to f01 and f12 that appears
// in f02) are given in that frame. When f01 and f12 are parallel the frame is
// two-dimensional, the degenerate flag is set, and g1 is the normalized
// f02 - s0*f01.
struct mode_frame {
    std::array<cplx, 3> f01;
    std::array<cplx, 3> f12;
    std::array<cplx, 3> f02;
    std::array<cplx, 3> g1;
    cplx f02_g1{0.0, 0.0};  // overlap (f02, g1)
    bool degenerate = false;
    int dimension = 3;  // active frame vectors (2 when degenerate)
};

// One eigenvalue of the one-excitation sector together with the coefficients
// of its normalized eigenvector on |1, vacuum> and on the photon state
// (f01 for the hybrid pair, the orthogonal combination for the zero entry).
struct prop41_entry {
    double value = 0.0;
    double atom_coeff = 0.0;
    double photon_coeff = 0.0;
};

// Bosonic occupation basis over up to three modes with total photon number
// at most max_total, ordered by total and then by occupation tuple
// (last mode fastest). Unused trailing modes hold zero occupation.
struct truncated_fock {
    int n_modes = 3;
    int max_total = 0;
    std::vector<std::array<int, 3>> states;
    std::map<std::array<int, 3>, std::size_t> index;

    std::size_t size() const { return states.size(); }
};

// Which decoupled-limit eigenvalue family a Kato computation perturbs:
// the lower hybrid value (e1 - sqrt(e1^2 + 4*l01^2))/2 or the upper one
// (e1 + sqrt(e1^2 + 4*l01^2))/2.
enum class kato_family { lower, upper };

// Builds the orthonormal mode frame from the model overlaps. Throws
// std::invalid_argument("gram-not-psd") when (s0, s1, s2) cannot come from
// unit vectors, and std::runtime_error("all-modes-collinear") when all three
// modes are parallel so no second frame vector exists.
mode_frame build_mode_frame(const three_level_model& model);

// Eigenvalues and eigenvector coefficients of the one-excitation sector:
// (e1 -/+ sqrt(e1^2 + 4*l01^2))/2 for the two hybrid states and 0 for the
// photon combination orthogonal to f01. Returns three entries in the order
// (lower, zero, upper); the zero entry disappears when f01 and f12 are
// parallel and the result has two entries (lower, upper).
std::vector<prop41_entry> prop41_spectrum(const three_level_model& model);

// The 6x6 matrix of the two-excitation sector Hamiltonian in the
// non-orthogonal product basis {|2,vac>, |1,f12>, |1,f01>, |0,f12 v f01>,
// |0,f01 v f01>, |0,f12 v f12>}. Its eigenvalues reproduce the sector
// spectrum for real s1; for complex s1 use b2_spectrum, which depends on
// |s1| only. Requires f01 and f12 non-parallel
// (std::runtime_error("degenerate-frame")).
Eigen::MatrixXcd b2_matrix(const three_level_model& model);

// Characteristic polynomial of the two-excitation sector, evaluated at zeta:
// the factored-out root at zero times the quintic
//   z(z-e1)[z(z-e1)(z-e2) - 3*l01^2(z-e2) - l12^2 z]
//     + z*l01^2(2*l01^2 + (2-|s1|^2)*l12^2) - 2*e2*l01^4.
cplx b2_charpoly(const three_level_model& model, cplx zeta);

// The six two-excitation sector eigenvalues, sorted ascending: 0 plus the
// five quintic roots located by Newton iteration from the second-order
// seeds. Throws std::runtime_error("root-isolation-failure") when two
// iterations collapse onto the same root or fail to converge.
std::vector<double> b2_spectrum(const three_level_model& model);

// Closed-form second-order approximations of the five quintic roots, sorted
// ascending. The default resolves each near-degenerate pair through its
// quadratic factor (errors O(lambda^4)); as_printed = true instead returns
// the classical display {0, -3*l01^2/e1, e1, e1 + 3*l01^2/e1 +
// l12^2/(e1-e2), e2 + l12^2/(e2-e1)}, whose paired entries are only
// accurate in their sum.
std::vector<double> b2_second_order(const three_level_model& model,
                                    bool as_printed = false);

// Occupation basis over n_modes modes (1 to 3) with total photon number at
// most max_total.
truncated_fock make_truncated_fock(int n_modes, int max_total);

// Matrix of the creation operator for the mode with the given frame
// coordinates. States that would exceed the photon cap are dropped, so the
// top total-number shell is annihilated rather than raised.
Eigen::MatrixXcd creation_matrix(const truncated_fock& fock,
                                 const std::array<cplx, 3>& coeffs);

// Full Hamiltonian on atom x truncated Fock space: diagonal atom energies
// plus the 0<->1 and 1<->2 couplings; include_v adds the l02-weighted
// 0<->2 coupling. Hermitian by construction. Throws
// std::runtime_error("dimension-overflow") when the matrix dimension would
// exceed 20000.
Eigen::MatrixXcd build_truncated_hamiltonian(const three_level_model& model,
                                             int max_total, bool include_v);

// Sorted eigenvalues of a Hermitian matrix. Throws
// std::invalid_argument("non-hermitian-input") when the matrix is not
// Hermitian within 1e-12 of its largest entry.
std::vector<double> brute_spectrum(const Eigen::MatrixXcd& matrix);

// Second-order splitting coefficient for the lower family:
//   A = n * l01^4 |(f02,g1)|^2 / (zeta^2 (l12^2 zeta + l01^2 (zeta - e2)))
// in the generic case, and with n|(f02,g1)|^2 replaced by
// n|(f02,g1)|^2 + |s0|^2 when f01 and f12 are parallel. Throws
// std::runtime_error("degenerate-denominator") when zeta or the bracketed
// denominator vanishes.
double kato_A(const three_level_model& model, int n);

// Second-order eigenvalue of the n-th splitting member of the chosen family:
// zeta + l02^2 * (1 + w * l01^2/zeta^2)^{-1} * A(zeta, n), with weight w = 1
// by default; printed_weight = true uses the classical w = n! variant.
double kato_z2(const three_level_model& model, kato_family family, int n,
               bool printed_weight = false);

// The same second-order eigenvalue computed from finite matrices: projector
// onto the g1-dressed unperturbed family, pseudo-resolvent of (zeta - H0) on
// its orthogonal complement, and the reduced-pair ratio truncated at second
// order in l02. max_total must be at least n + 3. The result is checked for
// stability against max_total + 1; a shift above 1e-9 throws
// std::runtime_error("truncation-insufficient"), and a numerically singular
// complement solve throws
// std::runtime_error("pseudo-inverse-ill-conditioned").
double kato_matrix_second_order(const three_level_model& model,
                                kato_family family, int n, int max_total);

// Second-order eigenvector approximant
//   chi = psi_n + l02 * Qt V psi_n + l02^2 (-P0 V Qt^2 V + Qt V Qt V) psi_n
// on the truncated Fock space, where psi_n is the dressed family vector and
// Qt the pseudo-resolvent above. Not normalized.
Eigen::VectorXcd kato_vector_second_order(const three_level_model& model,
                                          kato_family family, int n,
                                          int max_total);

// The normalized unperturbed family vector psi_n: n photons in mode g1 on
// top of the hybrid eigenvector of the chosen family.
Eigen::VectorXcd dressed_family_vector(const three_level_model& model,
                                       kato_family family, int n,
                                       int max_total);

}  // namespace atlas
