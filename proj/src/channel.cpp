#include "aqec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " out of [0,1]");
}

bool is_zero_matrix(const Mat& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

// Drops all-zero Kraus operators and verifies the trace-preservation sum.
QuantumChannel finalize(int dim_in, int dim_out, std::vector<Mat> kraus) {
    QuantumChannel c;
    c.dim_in = dim_in;
    c.dim_out = dim_out;
    for (auto& k : kraus) {
        if (k.rows() != dim_out || k.cols() != dim_in)
            throw std::invalid_argument("channel: Kraus shape mismatch");
        if (!is_zero_matrix(k)) c.kraus.push_back(std::move(k));
    }
    if (c.kraus.empty()) throw std::invalid_argument("channel: no nonzero Kraus operators");
    if (!is_cptp(c)) throw std::invalid_argument("channel: Kraus sum not trace-preserving");
    return c;
}

}  // namespace

QuantumChannel identity_channel(int dim) {
    return finalize(dim, dim, {Mat::Identity(dim, dim)});
}

QuantumChannel make_amplitude_damping(double p) {
    check_prob(p, "damping probability");
    Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - p);
    e1(0, 1) = std::sqrt(p);
    return finalize(2, 2, {e0, e1});
}

QuantumChannel make_rotated_amplitude_damping(double gamma, const DampingDirection& dir) {
    check_prob(gamma, "damping probability");
    Vec v(2), vperp(2);
    const double c = std::cos(dir.theta / 2.0), s = std::sin(dir.theta / 2.0);
    const cxd ph = std::exp(I_UNIT * dir.phi);
    v << c, ph * s;
    vperp << -std::conj(ph) * s, c;
    Mat e0 = v * v.adjoint() + std::sqrt(1.0 - gamma) * vperp * vperp.adjoint();
    Mat e1 = std::sqrt(gamma) * v * vperp.adjoint();
    return finalize(2, 2, {e0, e1});
}

Mat haar_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd(g(rng), g(rng));
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge so the distribution is Haar: absorb the phases of diag(R) into Q.
    for (int j = 0; j < dim; ++j) {
        const cxd d = r(j, j);
        const cxd phase = (std::abs(d) == 0.0) ? cxd(1.0) : d / std::abs(d);
        q.col(j) *= phase;
    }
    return q;
}

QuantumChannel make_random_channel(double alpha, std::uint64_t seed) {
    check_prob(alpha, "mixing weight");
    std::mt19937_64 rng(seed);
    const Mat u = haar_unitary(4, rng);
    // Φ acts on system ⊗ |0> ancilla; tracing the ancilla gives Kraus
    // Φ_i(r,c) = U(2r+i, 2c), i ∈ {0,1}.
    std::vector<Mat> kraus;
    kraus.push_back(std::sqrt(1.0 - alpha) * Mat::Identity(2, 2));
    for (int i = 0; i < 2; ++i) {
        Mat phi(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) phi(r, c) = u(2 * r + i, 2 * c);
        kraus.push_back(std::sqrt(alpha) * phi);
    }
    return finalize(2, 2, std::move(kraus));
}

QuantumChannel make_named(const std::string& name, double p) {
    check_prob(p, "error probability");
    const Mat id = pauli_i();
    if (name == "bitflip")
        return finalize(2, 2, {std::sqrt(1.0 - p) * id, std::sqrt(p) * pauli_x()});
    if (name == "phaseflip")
        return finalize(2, 2, {std::sqrt(1.0 - p) * id, std::sqrt(p) * pauli_z()});
    if (name == "depolarizing")
        return finalize(2, 2, {std::sqrt(1.0 - 3.0 * p / 4.0) * id, std::sqrt(p) / 2.0 * pauli_x(),
                               std::sqrt(p) / 2.0 * pauli_y(), std::sqrt(p) / 2.0 * pauli_z()});
    throw std::invalid_argument("make_named: unknown channel name '" + name + "'");
}

QuantumChannel tensor(const std::vector<QuantumChannel>& channels) {
    if (channels.empty()) throw std::invalid_argument("tensor: empty channel list");
    QuantumChannel acc = channels[0];
    for (std::size_t n = 1; n < channels.size(); ++n) {
        const QuantumChannel& next = channels[n];
        std::vector<Mat> kraus;
        kraus.reserve(acc.kraus.size() * next.kraus.size());
        for (const Mat& a : acc.kraus)
            for (const Mat& b : next.kraus) kraus.push_back(kron(a, b));
        acc = finalize(acc.dim_in * next.dim_in, acc.dim_out * next.dim_out, std::move(kraus));
    }
    return acc;
}

QuantumChannel tensor_power(const QuantumChannel& c, int n) {
    if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
    return tensor(std::vector<QuantumChannel>(n, c));
}

bool is_cptp(const QuantumChannel& c, double tol) {
    if (c.kraus.empty()) return false;
    Mat sum = Mat::Zero(c.dim_in, c.dim_in);
    for (const Mat& k : c.kraus) sum.noalias() += k.adjoint() * k;
    return max_abs_diff(sum, Mat::Identity(c.dim_in, c.dim_in)) <= tol;
}

Mat apply_channel(const QuantumChannel& c, const Mat& rho) {
    if (rho.rows() != c.dim_in || rho.cols() != c.dim_in)
        throw std::invalid_argument("apply_channel: density matrix dimension mismatch");
    if (max_abs_diff(rho, rho.adjoint()) > 1e-9)
        throw std::invalid_argument("apply_channel: input not Hermitian");
    return apply_raw(c, rho);
}

Mat apply_raw(const QuantumChannel& c, const Mat& op) {
    Mat out = Mat::Zero(c.dim_out, c.dim_out);
    for (const Mat& k : c.kraus) out.noalias() += k * op * k.adjoint();
    return out;
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
    if (first.dim_out != second.dim_in) throw std::invalid_argument("compose: dimension mismatch");
    std::vector<Mat> kraus;
    kraus.reserve(first.kraus.size() * second.kraus.size());
    for (const Mat& s : second.kraus)
        for (const Mat& f : first.kraus) kraus.push_back(s * f);
    QuantumChannel c;
    c.dim_in = first.dim_in;
    c.dim_out = second.dim_out;
    for (auto& k : kraus)
        if (!is_zero_matrix(k)) c.kraus.push_back(std::move(k));
    return c;
}

}  // namespace aqec
