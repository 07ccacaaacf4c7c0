#pragma once

#include "aqec/channel.hpp"
#include "aqec/codes.hpp"

namespace aqec {

// Logical Pauli operators supported on a two-dimensional codespace.
// sigma0 is the codespace projector; x,y,z square to it.
struct PauliFrame {
    Mat sigma0, x, y, z;
};

PauliFrame pauli_frame(const Codespace& code);

// Kraus R_i = P E_i† E(P)^{-1/2}, inverse square root on the support of E(P)
// (eigenvalues below tol * lambda_max treated as zero). Trace-preserving on the
// support projector of E(P).
QuantumChannel petz_recovery(const QuantumChannel& channel, const Codespace& code,
                             double tol = 1e-10);

// Canonical syndrome recovery for the [[5,1,3]] code: one Kraus per syndrome,
// the diagnosed weight-<=1 Pauli inverse times the syndrome projector.
// Reproduces the 1 - 15p^2/8 small-p law under amplitude damping.
QuantumChannel five_qubit_standard_recovery();

struct PerfectQecReport {
    bool satisfied = false;
    Mat alpha;        // alpha_ij = tr(P E_i† E_j P)/d
    double residual;  // max_ij || P E_i† E_j P - alpha_ij P ||_2
};

PerfectQecReport check_perfect_qec(const Codespace& code, const std::vector<Mat>& errors);

struct AqecWitness {
    Mat beta;                  // beta_ij = tr(P E_i† E(P)^{-1/2} E_j P)/d
    Eigen::MatrixXd delta_norm;  // operator norms of Delta_ij = P E_i† E(P)^{-1/2} E_j P - beta_ij P
};

AqecWitness check_aqec(const Codespace& code, const QuantumChannel& channel, double tol = 1e-10);
std::string format_witness(const AqecWitness& w);

// T_ab = (1/2) tr(sigma_a M(sigma_b)) for a,b in {x,y,z}, M = recovery ∘ channel
// restricted to the codespace. Throws if any imaginary residue exceeds 1e-9.
Eigen::Matrix3d t_matrix(const QuantumChannel& channel, const QuantumChannel& recovery,
                         const Codespace& code);

// eta = (1/2)(1 - t_min) with t_min the smallest eigenvalue of (T + T^T)/2.
// The worst-case (squared) fidelity over pure codestates is 1 - eta when the
// composite map is unital on the codespace.
double fidelity_loss(const QuantumChannel& channel, const QuantumChannel& recovery,
                     const Codespace& code);

// F_min^2 = 1 - fidelity_loss; F_min is sqrt of that.
double worst_case_fidelity_sq(const QuantumChannel& channel, const QuantumChannel& recovery,
                              const Codespace& code);
double worst_case_fidelity(const QuantumChannel& channel, const QuantumChannel& recovery,
                           const Codespace& code);

// Independent oracle: min over a (theta, phi) grid of pure codestates of
// <psi| M(|psi><psi|) |psi>. d = 2 only.
double worst_case_fidelity_bruteforce(const QuantumChannel& channel,
                                      const QuantumChannel& recovery, const Codespace& code,
                                      int n_theta = 181, int n_phi = 361);

// ---- fast path ---------------------------------------------------------------
// Petz recovery held in factored form: R_j = W r_j with W the D x d codeword
// matrix. Lets the composite act entirely in the d-dimensional logical space.
struct FactoredPetz {
    Mat w;                   // D x d, columns = codewords
    std::vector<Mat> r;      // d x D each
    double support_trace{};  // tr P_E, for diagnostics
};

FactoredPetz factored_petz(const QuantumChannel& channel, const Codespace& code,
                           double tol = 1e-10);

// Exact worst-case squared fidelity of (fixed recovery) ∘ channel over pure
// codestates, valid also when recovery was built for a different channel
// (the composite need not be unital or trace-preserving then). Minimizes the
// quadratic form F(n) = (1/4)(s00 + b·n + 2 n·T_sym n) over the Bloch sphere.
double worst_case_fidelity_sq_factored(const FactoredPetz& recovery,
                                       const std::vector<Mat>& channel_kraus);

Eigen::Matrix3d t_matrix_factored(const FactoredPetz& recovery,
                                  const std::vector<Mat>& channel_kraus);

// min over |n|=1 of n·A n + b·n for symmetric A (trust-region subproblem on the
// unit sphere). Returns the minimum value.
double min_quadratic_on_sphere(const Eigen::Matrix3d& a, const Eigen::Vector3d& b);

}  // namespace aqec
