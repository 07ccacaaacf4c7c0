#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace aqec {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cxd I_UNIT{0.0, 1.0};

// Kronecker product, row-major block convention: (A⊗B)[i*rb+k][j*cb+l] = A[i][j]*B[k][l].
Mat kron(const Mat& a, const Mat& b);

// Computational basis column vector |k> in `dim` dimensions.
Vec basis_state(int dim, int k);

// Single-qubit Pauli matrices and identity.
const Mat& pauli_i();
const Mat& pauli_x();
const Mat& pauli_y();
const Mat& pauli_z();

// Dense matrix of a Pauli string such as "XZZXI" (left factor = most significant qubit).
Mat pauli_string(const std::string& s);

// M^{-1/2} restricted to the support of a Hermitian PSD matrix.
// Eigenvalues below cutoff * lambda_max are treated as zero (their inverse
// contribution is dropped). Also returns the support projector if requested.
Mat herm_inv_sqrt(const Mat& m, double cutoff, Mat* support_projector = nullptr);

// Frobenius distance min_phi ||a - e^{i phi} b||_F; zero iff equal up to global phase.
double phase_aligned_distance(const Mat& a, const Mat& b);

// max_ij |a_ij - (e^{i phi} b)_ij| at the distance-minimizing phase.
double phase_aligned_max_diff(const Mat& a, const Mat& b);

// max_ij |a_ij - b_ij|
double max_abs_diff(const Mat& a, const Mat& b);

// || m ||_2 (largest singular value)
double operator_norm(const Mat& m);

bool is_unitary(const Mat& m, double tol);

}  // namespace aqec
