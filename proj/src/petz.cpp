#include "aqec/petz.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "aqec/util.hpp"

namespace aqec {

namespace {

void require_logical_qubit(const Codespace& code) {
    if (logical_dim(code) != 2)
        throw std::invalid_argument("operation requires a two-dimensional codespace");
}

// D x d matrix whose columns are the codewords.
Mat codeword_matrix(const Codespace& code) {
    Mat w(code.phys_dim, logical_dim(code));
    for (int i = 0; i < logical_dim(code); ++i) w.col(i) = code.codewords[i];
    return w;
}

double real_checked(cxd z, double tol, const char* what) {
    if (std::abs(z.imag()) > tol)
        throw std::runtime_error(std::string(what) + ": imaginary residue exceeds tolerance");
    return z.real();
}

}  // namespace

PauliFrame pauli_frame(const Codespace& code) {
    require_logical_qubit(code);
    const Mat w = codeword_matrix(code);
    PauliFrame f;
    f.sigma0 = w * w.adjoint();
    f.x = w * pauli_x() * w.adjoint();
    f.y = w * pauli_y() * w.adjoint();
    f.z = w * pauli_z() * w.adjoint();
    return f;
}

QuantumChannel petz_recovery(const QuantumChannel& channel, const Codespace& code, double tol) {
    if (channel.dim_in != code.phys_dim)
        throw std::invalid_argument("petz_recovery: channel/code dimension mismatch");
    const Mat p = projector(code);
    const Mat ep = apply_raw(channel, p);
    const Mat n = herm_inv_sqrt(ep, tol);

    QuantumChannel rec;
    rec.dim_in = channel.dim_out;
    rec.dim_out = channel.dim_in;
    for (const Mat& e : channel.kraus) {
        Mat r = p * e.adjoint() * n;
        if (r.cwiseAbs().maxCoeff() > 0.0) rec.kraus.push_back(std::move(r));
    }
    if (rec.kraus.empty()) throw std::runtime_error("petz_recovery: channel support misses code");
    return rec;
}

QuantumChannel five_qubit_standard_recovery() {
    const std::vector<std::string> gens = {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"};
    const auto commutes = [](const std::string& a, const std::string& b) {
        int anti = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != 'I' && b[i] != 'I' && a[i] != b[i]) anti ^= 1;
        return anti == 0;
    };
    // Weight-<=1 Paulis hit all 16 syndromes exactly once (the code is perfect).
    std::vector<std::string> errs = {"IIIII"};
    for (int q = 0; q < 5; ++q)
        for (char c : {'X', 'Y', 'Z'}) {
            std::string s = "IIIII";
            s[q] = c;
            errs.push_back(s);
        }
    QuantumChannel rec;
    rec.dim_in = rec.dim_out = 32;
    for (const std::string& e : errs) {
        Mat pi = Mat::Identity(32, 32);
        for (const std::string& g : gens) {
            const double sign = commutes(e, g) ? 1.0 : -1.0;
            pi = pi * 0.5 * (Mat::Identity(32, 32) + sign * pauli_string(g));
        }
        rec.kraus.push_back(pauli_string(e).adjoint() * pi);
    }
    if (!is_cptp(rec, 1e-12)) throw std::runtime_error("five_qubit_standard_recovery: not TP");
    return rec;
}

PerfectQecReport check_perfect_qec(const Codespace& code, const std::vector<Mat>& errors) {
    const Mat p = projector(code);
    const int d = logical_dim(code);
    const int m = static_cast<int>(errors.size());
    PerfectQecReport rep;
    rep.alpha = Mat::Zero(m, m);
    rep.residual = 0.0;
    for (const Mat& e : errors)
        if (e.rows() != code.phys_dim || e.cols() != code.phys_dim)
            throw std::invalid_argument("check_perfect_qec: operator dimension mismatch");
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const Mat block = p * errors[i].adjoint() * errors[j] * p;
            const cxd a = block.trace() / static_cast<double>(d);
            rep.alpha(i, j) = a;
            rep.residual = std::max(rep.residual, operator_norm(block - a * p));
        }
    }
    rep.satisfied = rep.residual < 1e-9;
    return rep;
}

AqecWitness check_aqec(const Codespace& code, const QuantumChannel& channel, double tol) {
    if (channel.dim_in != code.phys_dim)
        throw std::invalid_argument("check_aqec: channel/code dimension mismatch");
    const Mat p = projector(code);
    const Mat n = herm_inv_sqrt(apply_raw(channel, p), tol);
    const int d = logical_dim(code);
    const int m = static_cast<int>(channel.kraus.size());
    AqecWitness w;
    w.beta = Mat::Zero(m, m);
    w.delta_norm = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const Mat block = p * channel.kraus[i].adjoint() * n * channel.kraus[j] * p;
            const cxd b = block.trace() / static_cast<double>(d);
            w.beta(i, j) = b;
            w.delta_norm(i, j) = operator_norm(block - b * p);
        }
    }
    return w;
}

std::string format_witness(const AqecWitness& w) {
    std::ostringstream os;
    os << "beta:\n" << w.beta << "\ndelta norms:\n" << w.delta_norm << "\n";
    return os.str();
}

Eigen::Matrix3d t_matrix(const QuantumChannel& channel, const QuantumChannel& recovery,
                         const Codespace& code) {
    const QuantumChannel composite = compose(recovery, channel);
    const PauliFrame f = pauli_frame(code);
    const Mat sig[3] = {f.x, f.y, f.z};
    Eigen::Matrix3d t;
    for (int b = 0; b < 3; ++b) {
        const Mat msb = apply_raw(composite, sig[b]);
        for (int a = 0; a < 3; ++a)
            t(a, b) = 0.5 * real_checked((sig[a] * msb).trace(), 1e-9, "t_matrix");
    }
    return t;
}

double fidelity_loss(const QuantumChannel& channel, const QuantumChannel& recovery,
                     const Codespace& code) {
    const Eigen::Matrix3d t = t_matrix(channel, recovery, code);
    const Eigen::Matrix3d tsym = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(tsym);
    return 0.5 * (1.0 - es.eigenvalues()(0));
}

double worst_case_fidelity_sq(const QuantumChannel& channel, const QuantumChannel& recovery,
                              const Codespace& code) {
    return 1.0 - fidelity_loss(channel, recovery, code);
}

double worst_case_fidelity(const QuantumChannel& channel, const QuantumChannel& recovery,
                           const Codespace& code) {
    return std::sqrt(worst_case_fidelity_sq(channel, recovery, code));
}

double worst_case_fidelity_bruteforce(const QuantumChannel& channel,
                                      const QuantumChannel& recovery, const Codespace& code,
                                      int n_theta, int n_phi) {
    require_logical_qubit(code);
    const Mat w = codeword_matrix(code);
    const QuantumChannel composite = compose(recovery, channel);

    // <psi|K|psi> for codestates only needs the 2x2 logical blocks of K.
    std::vector<Eigen::Matrix2cd> blocks;
    blocks.reserve(composite.kraus.size());
    for (const Mat& k : composite.kraus) blocks.push_back((w.adjoint() * k * w).eval());

    const double pi = std::acos(-1.0);
    std::mutex reduce_mu;
    double global_min = std::numeric_limits<double>::infinity();
    parallel_for(0, n_theta, [&](std::int64_t lo, std::int64_t hi) {
        double local = std::numeric_limits<double>::infinity();
        for (std::int64_t it = lo; it < hi; ++it) {
            const double theta = pi * static_cast<double>(it) / (n_theta - 1);
            const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
            for (int ip = 0; ip < n_phi; ++ip) {
                const double phi = 2.0 * pi * static_cast<double>(ip) / (n_phi - 1);
                Eigen::Vector2cd psi(c, std::exp(I_UNIT * phi) * s);
                double fid = 0.0;
                for (const auto& k : blocks) {
                    const cxd amp = psi.dot(k * psi);
                    fid += std::norm(amp);
                }
                local = std::min(local, fid);
            }
        }
        std::lock_guard<std::mutex> g(reduce_mu);
        global_min = std::min(global_min, local);
    });
    return global_min;
}

FactoredPetz factored_petz(const QuantumChannel& channel, const Codespace& code, double tol) {
    if (channel.dim_in != code.phys_dim)
        throw std::invalid_argument("factored_petz: channel/code dimension mismatch");
    FactoredPetz f;
    f.w = codeword_matrix(code);
    const Mat p = f.w * f.w.adjoint();
    Mat supp;
    const Mat n = herm_inv_sqrt(apply_raw(channel, p), tol, &supp);
    f.support_trace = supp.trace().real();
    for (const Mat& e : channel.kraus) {
        Mat r = f.w.adjoint() * e.adjoint() * n;
        if (r.cwiseAbs().maxCoeff() > 0.0) f.r.push_back(std::move(r));
    }
    return f;
}

namespace {

// Logical-space images m_b = sum_{j,i} A_{ji} M_b A_{ji}† with A_{ji} = r_j F_i W,
// for M in {I, X, Y, Z}. Returns tuple (m0, mx, my, mz).
std::array<Eigen::Matrix2cd, 4> logical_images(const FactoredPetz& rec,
                                               const std::vector<Mat>& kraus) {
    const Eigen::Matrix2cd mi = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd mx, my, mz;
    mx << 0, 1, 1, 0;
    my << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
    mz << 1, 0, 0, -1;
    std::array<Eigen::Matrix2cd, 4> out{Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero(),
                                        Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
    for (const Mat& f : kraus) {
        const Mat fw = f * rec.w;  // D x d
        for (const Mat& r : rec.r) {
            const Eigen::Matrix2cd a = r * fw;
            const Eigen::Matrix2cd ad = a.adjoint();
            out[0] += a * mi * ad;
            out[1] += a * mx * ad;
            out[2] += a * my * ad;
            out[3] += a * mz * ad;
        }
    }
    return out;
}

}  // namespace

Eigen::Matrix3d t_matrix_factored(const FactoredPetz& rec, const std::vector<Mat>& kraus) {
    const auto img = logical_images(rec, kraus);
    const Eigen::Matrix2cd sig[3] = {
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0)).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};
    Eigen::Matrix3d t;
    for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a)
            t(a, b) = 0.5 * real_checked((sig[a] * img[b + 1]).trace(), 1e-9, "t_matrix");
    return t;
}

double worst_case_fidelity_sq_factored(const FactoredPetz& rec, const std::vector<Mat>& kraus) {
    const auto img = logical_images(rec, kraus);
    const Eigen::Matrix2cd sig[3] = {
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0)).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};

    const double s00 = real_checked(img[0].trace(), 1e-9, "worst_case");
    Eigen::Vector3d b;
    Eigen::Matrix3d t;
    for (int a = 0; a < 3; ++a) {
        const double v = real_checked((sig[a] * img[0]).trace(), 1e-9, "worst_case");
        const double wq = real_checked(img[a + 1].trace(), 1e-9, "worst_case");
        b(a) = v + wq;
        for (int bb = 0; bb < 3; ++bb)
            t(a, bb) = 0.5 * real_checked((sig[a] * img[bb + 1]).trace(), 1e-9, "worst_case");
    }
    const Eigen::Matrix3d tsym = 0.5 * (t + t.transpose());
    const double qmin = min_quadratic_on_sphere(2.0 * tsym, b);
    return 0.25 * (s00 + qmin);
}

double min_quadratic_on_sphere(const Eigen::Matrix3d& a, const Eigen::Vector3d& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
    const Eigen::Vector3d lam = es.eigenvalues();
    const Eigen::Vector3d beta = es.eigenvectors().transpose() * b;
    const double lmin = lam(0);

    const auto norm2_at = [&](double mu) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double denom = 2.0 * (lam(i) - mu);
            if (denom != 0.0) s += (beta(i) * beta(i)) / (denom * denom);
        }
        return s;
    };

    // Contribution of eigendirections strictly above lmin, evaluated at mu = lmin.
    double s_upper = 0.0;
    double beta_min_sq = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (lam(i) - lmin < 1e-12 * (std::abs(lmin) + 1.0))
            beta_min_sq += beta(i) * beta(i);
        else
            s_upper += (beta(i) * beta(i)) / (4.0 * (lam(i) - lmin) * (lam(i) - lmin));
    }

    double mu = lmin;
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    if (beta_min_sq < 1e-28 && s_upper <= 1.0) {
        // Hard case: solution sits at mu = lmin with slack along the bottom eigenspace.
        mu = lmin;
        for (int i = 0; i < 3; ++i)
            if (lam(i) - lmin >= 1e-12 * (std::abs(lmin) + 1.0))
                y(i) = -beta(i) / (2.0 * (lam(i) - mu));
        double slack = std::max(0.0, 1.0 - y.squaredNorm());
        for (int i = 0; i < 3; ++i)
            if (lam(i) - lmin < 1e-12 * (std::abs(lmin) + 1.0)) {
                y(i) = std::sqrt(slack);
                break;
            }
    } else {
        // ||y(mu)||^2 is increasing on (-inf, lmin); bracket and bisect.
        double hi = lmin - 1e-14 * (std::abs(lmin) + 1.0);
        double span = std::max(1.0, b.norm());
        double lo = lmin - span;
        while (norm2_at(lo) > 1.0) {
            span *= 2.0;
            lo = lmin - span;
        }
        // Ensure the upper end overshoots; widen toward lmin if needed.
        while (norm2_at(hi) < 1.0 && hi < lmin) hi = lmin - (lmin - hi) * 0.5;
        for (int it = 0; it < 200; ++it) {
            mu = 0.5 * (lo + hi);
            (norm2_at(mu) < 1.0 ? lo : hi) = mu;
        }
        mu = 0.5 * (lo + hi);
        for (int i = 0; i < 3; ++i) y(i) = -beta(i) / (2.0 * (lam(i) - mu));
        y /= y.norm();
    }
    // q(y) = mu + b·y / 2 at the constrained stationary point.
    return mu + 0.5 * beta.dot(y);
}

}  // namespace aqec
