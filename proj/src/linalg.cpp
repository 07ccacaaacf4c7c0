#include "aqec/linalg.hpp"

#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace aqec {

Mat kron(const Mat& a, const Mat& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Vec basis_state(int dim, int k) {
    if (k < 0 || k >= dim) throw std::invalid_argument("basis_state: index out of range");
    Vec v = Vec::Zero(dim);
    v(k) = 1.0;
    return v;
}

const Mat& pauli_i() {
    static const Mat m = Mat::Identity(2, 2);
    return m;
}

const Mat& pauli_x() {
    static const Mat m = [] {
        Mat x(2, 2);
        x << 0, 1, 1, 0;
        return x;
    }();
    return m;
}

const Mat& pauli_y() {
    static const Mat m = [] {
        Mat y(2, 2);
        y << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
        return y;
    }();
    return m;
}

const Mat& pauli_z() {
    static const Mat m = [] {
        Mat z(2, 2);
        z << 1, 0, 0, -1;
        return z;
    }();
    return m;
}

Mat pauli_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("pauli_string: empty string");
    Mat out = Mat::Identity(1, 1);
    for (char c : s) {
        switch (c) {
            case 'I': out = kron(out, pauli_i()); break;
            case 'X': out = kron(out, pauli_x()); break;
            case 'Y': out = kron(out, pauli_y()); break;
            case 'Z': out = kron(out, pauli_z()); break;
            default: throw std::invalid_argument("pauli_string: bad character");
        }
    }
    return out;
}

Mat herm_inv_sqrt(const Mat& m, double cutoff, Mat* support_projector) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("herm_inv_sqrt: eigensolver failed");
    const auto& vals = es.eigenvalues();
    const Mat& vecs = es.eigenvectors();
    const double lmax = vals.cwiseAbs().maxCoeff();
    if (lmax <= 0.0) throw std::invalid_argument("herm_inv_sqrt: matrix is numerically zero");
    const double thresh = cutoff * lmax;

    Mat out = Mat::Zero(m.rows(), m.cols());
    Mat proj = Mat::Zero(m.rows(), m.cols());
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) > thresh) {
            const Vec v = vecs.col(i);
            out.noalias() += (1.0 / std::sqrt(vals(i))) * v * v.adjoint();
            proj.noalias() += v * v.adjoint();
        }
    }
    if (support_projector) *support_projector = proj;
    return out;
}

namespace {

// ||a - e^{i phi} b|| is minimized at phi = -arg tr(a+ b); returning the
// aligned copy of b keeps the subtraction cancellation-free even when the
// distance is at roundoff scale.
Mat phase_aligned_copy(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("phase alignment: shape mismatch");
    const cxd ov = (a.adjoint() * b).trace();
    if (std::abs(ov) == 0.0) return b;
    return (std::conj(ov) / std::abs(ov)) * b;
}

}  // namespace

double phase_aligned_distance(const Mat& a, const Mat& b) {
    return (a - phase_aligned_copy(a, b)).norm();
}

double phase_aligned_max_diff(const Mat& a, const Mat& b) {
    return max_abs_diff(a, phase_aligned_copy(a, b));
}

double max_abs_diff(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double operator_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

bool is_unitary(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs_diff(m.adjoint() * m, Mat::Identity(m.rows(), m.cols())) <= tol;
}

}  // namespace aqec
