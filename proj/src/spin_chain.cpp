#include "aqec/spin_chain.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aqec/petz.hpp"
#include "aqec/util.hpp"

namespace aqec {
namespace {

void check_spec(const ChainSpec& spec) {
    const int n = spec.n_sites;
    if (n < 2) throw std::invalid_argument("chain spec: need at least two sites");
    if (static_cast<int>(spec.hop.size()) != n - 1 || static_cast<int>(spec.zz.size()) != n - 1)
        throw std::invalid_argument("chain spec: coupling lists must have n_sites-1 entries");
    if (static_cast<int>(spec.field.size()) != n)
        throw std::invalid_argument("chain spec: field list must have n_sites entries");
    if (spec.sender < 1 || spec.sender > n || spec.receiver < 1 || spec.receiver > n)
        throw std::invalid_argument("chain spec: sender/receiver out of range");
}

// The disorder model perturbs the uniform chain; everything first-order assumes it.
void check_uniform(const ChainSpec& spec) {
    check_spec(spec);
    for (double j : spec.hop)
        if (std::abs(j - 0.5) > 1e-12)
            throw std::invalid_argument("chain spec: uniform chain required (hop = 1/2)");
    for (double j : spec.zz)
        if (std::abs(j - 0.5) > 1e-12)
            throw std::invalid_argument("chain spec: uniform chain required (zz = 1/2)");
    for (double b : spec.field)
        if (std::abs(b) > 1e-12)
            throw std::invalid_argument("chain spec: uniform chain required (zero field)");
}

struct ChainEigen {
    Eigen::VectorXd lam;
    Eigen::MatrixXd q;
};

ChainEigen chain_eigen(const ChainSpec& spec) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_single_excitation_hamiltonian(spec));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("chain eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat propagator(const ChainEigen& ce, double t) {
    const int n = static_cast<int>(ce.lam.size());
    Vec phase(n);
    for (int m = 0; m < n; ++m) phase(m) = std::exp(cxd{0.0, -ce.lam(m) * t});
    return ce.q.cast<cxd>() * phase.asDiagonal() * ce.q.transpose().cast<cxd>();
}

cxd amplitude_at(const ChainEigen& ce, int r0, int s0, double t) {
    cxd f{0.0, 0.0};
    for (int m = 0; m < ce.lam.size(); ++m)
        f += ce.q(r0, m) * ce.q(s0, m) * std::exp(cxd{0.0, -ce.lam(m) * t});
    return f;
}

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

ChainSpec perturbed_uniform(const ChainSpec& spec, const std::vector<double>& delta) {
    ChainSpec d = spec;
    for (int i = 0; i < spec.n_sites - 1; ++i) d.hop[i] = d.zz[i] = 0.5 * (1.0 + delta[i]);
    return d;
}

}  // namespace

ChainSpec xxx_chain(int n_sites, int sender, int receiver) {
    ChainSpec spec;
    spec.n_sites = n_sites;
    spec.hop.assign(std::max(n_sites - 1, 0), 0.5);
    spec.zz.assign(std::max(n_sites - 1, 0), 0.5);
    spec.field.assign(std::max(n_sites, 0), 0.0);
    spec.sender = sender;
    spec.receiver = receiver;
    check_spec(spec);
    return spec;
}

TransitionRecord make_transition_record(double t, cxd f) {
    TransitionRecord rec;
    rec.t = t;
    rec.f = f;
    rec.magnitude = std::abs(f);
    rec.phase = std::arg(f);
    if (rec.magnitude > 1.0 + 1e-9)
        throw std::invalid_argument("transition record: |f| exceeds 1");
    return rec;
}

Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec) {
    check_spec(spec);
    const int n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int l = 0; l < n; ++l) {
        double d = -2.0 * spec.field[l];
        if (l > 0) d += 2.0 * spec.zz[l - 1];
        if (l < n - 1) d += 2.0 * spec.zz[l];
        h(l, l) = d;
    }
    for (int l = 0; l < n - 1; ++l) h(l, l + 1) = h(l + 1, l) = -2.0 * spec.hop[l];
    return h;
}

Mat transition_matrix(const ChainSpec& spec, double t) {
    return propagator(chain_eigen(spec), t);
}

TransitionRecord transition_amplitude(const ChainSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("transition amplitude: negative time");
    ChainEigen ce = chain_eigen(spec);
    return make_transition_record(t, amplitude_at(ce, spec.receiver - 1, spec.sender - 1, t));
}

TransitionRecord optimal_transfer_time(const ChainSpec& spec, double t_max, double dt) {
    if (!(dt > 0.0) || t_max < dt)
        throw std::invalid_argument("optimal transfer time: empty grid");
    ChainEigen ce = chain_eigen(spec);
    const int r0 = spec.receiver - 1, s0 = spec.sender - 1;
    const auto steps = static_cast<std::int64_t>(t_max / dt + 1e-9);
    double best_mag = -1.0, best_t = dt;
    for (std::int64_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double mag = std::abs(amplitude_at(ce, r0, s0, t));
        if (mag > best_mag) {
            best_mag = mag;
            best_t = t;
        }
    }
    return make_transition_record(best_t, amplitude_at(ce, r0, s0, best_t));
}

QuantumChannel induced_channel(const TransitionRecord& rec) {
    const double mag = std::abs(rec.f);
    if (mag > 1.0 + 1e-9) throw std::invalid_argument("induced channel: |f| exceeds 1");
    const double loss = std::max(0.0, 1.0 - mag * mag);
    Mat e0 = Mat::Zero(2, 2), e1 = Mat::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = rec.f;
    e1(0, 1) = std::sqrt(loss);
    return {2, 2, {e0, e1}};
}

double noqec_fidelity(const TransitionRecord& rec) { return std::norm(rec.f); }

double aqec_transfer_fidelity(const TransitionRecord& rec, const Codespace& code) {
    int chains = 0;
    while ((1 << (chains + 1)) <= code.phys_dim) ++chains;
    if ((1 << chains) != code.phys_dim || chains < 2 || chains > 5)
        throw std::invalid_argument("aqec transfer: code must span 2..5 qubit chains");
    QuantumChannel composite = tensor_power(induced_channel(rec), chains);
    FactoredPetz fp = factored_petz(composite, code);
    return worst_case_fidelity_sq_factored(fp, composite.kraus);
}

double repeated_qec(double p, double alpha, int k) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("repeated qec: p outside [0,1]");
    if (k < 1) throw std::invalid_argument("repeated qec: need at least one round");
    const double loss = alpha * p * p;
    if (loss > 1.0) throw std::invalid_argument("repeated qec: per-round loss exceeds 1");
    return std::pow(1.0 - loss, k);
}

std::vector<cxd> dyson_coefficients(const ChainSpec& spec, double t) {
    check_uniform(spec);
    const int n = spec.n_sites;
    std::vector<cxd> c(n - 1, cxd{0.0, 0.0});
    if (t == 0.0) return c;
    if (t < 0.0) throw std::invalid_argument("dyson coefficients: negative time");
    ChainEigen ce = chain_eigen(spec);
    const int s0 = spec.sender - 1, r0 = spec.receiver - 1;

    // Per-bond perturbation of H is rank one, M_i = v_i v_i^T with
    // v_i = e_i - e_{i+1}; accumulate a_i = integral of U(tau)* v_i v_i^T U(tau) e_s.
    const int panels = 2000;
    const double h = t / (2.0 * panels);
    std::vector<Vec> acc(n - 1, Vec::Zero(n));
    for (int k = 0; k <= 2 * panels; ++k) {
        const double tau = (k == 2 * panels) ? t : static_cast<double>(k) * h;
        double w = (k == 0 || k == 2 * panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        w *= h / 3.0;
        const Mat u = propagator(ce, tau);
        for (int i = 0; i < n - 1; ++i) {
            const cxd d = u(i, s0) - u(i + 1, s0);
            acc[i] += (w * d) * (u.col(i) - u.col(i + 1)).conjugate();
        }
    }
    const Mat ut = propagator(ce, t);
    for (int i = 0; i < n - 1; ++i) c[i] = -I_UNIT * (ut.row(r0) * acc[i]).value();
    return c;
}

std::vector<cxd> disorder_sample(const ChainSpec& spec, double t, const DisorderSpec& dis) {
    check_uniform(spec);
    if (dis.delta < 0.0) throw std::invalid_argument("disorder: negative strength");
    if (dis.n_samples < 1) throw std::invalid_argument("disorder: need at least one sample");
    std::vector<cxd> out(dis.n_samples);
    if (dis.delta == 0.0) {
        std::fill(out.begin(), out.end(), transition_amplitude(spec, t).f);
        return out;
    }
    const int r0 = spec.receiver - 1, s0 = spec.sender - 1;
    parallel_for(0, dis.n_samples, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> delta(spec.n_sites - 1);
        for (std::int64_t m = lo; m < hi; ++m) {
            std::mt19937_64 rng(dis.seed ^ (kSeedStride * static_cast<std::uint64_t>(m + 1)));
            std::uniform_real_distribution<double> u(-dis.delta, dis.delta);
            for (double& d : delta) d = u(rng);
            ChainEigen ce = chain_eigen(perturbed_uniform(spec, delta));
            out[static_cast<size_t>(m)] = amplitude_at(ce, r0, s0, t);
        }
    });
    return out;
}

namespace {

double poly_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) v = v * u + c[j];
    return v;
}

// Coefficients of p(u + s) given those of p(v).
std::vector<double> poly_shift(const std::vector<double>& c, double s) {
    const int n = static_cast<int>(c.size());
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double term = c[j];  // c_j C(j,k) s^{j-k}, walked from k = j down to 0
        for (int k = j; k >= 0; --k) {
            out[k] += term;
            if (k > 0) term = term * k / static_cast<double>(j - k + 1) * s;
        }
    }
    return out;
}

std::vector<double> poly_antiderivative(const std::vector<double>& c) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (size_t j = 0; j < c.size(); ++j) out[j + 1] = c[j] / static_cast<double>(j + 1);
    return out;
}

void rebuild_cumulative(PiecewiseDensity& d) {
    d.cum.assign(d.coeffs.size() + 1, 0.0);
    for (size_t k = 0; k < d.coeffs.size(); ++k) {
        const auto a = poly_antiderivative(d.coeffs[k]);
        d.cum[k + 1] = d.cum[k] + poly_eval(a, d.knots[k + 1] - d.knots[k]);
    }
}

// Antiderivative value-polynomial of the density at position x (local to piece
// start), clamped to 0 / total mass outside the support.
std::vector<double> antiderivative_poly_at(const PiecewiseDensity& g, double x, double local_origin) {
    if (x <= g.knots.front()) return {0.0};
    if (x >= g.knots.back()) return {g.cum.back()};
    auto it = std::upper_bound(g.knots.begin(), g.knots.end(), x);
    int p = static_cast<int>(it - g.knots.begin()) - 1;
    p = std::clamp(p, 0, static_cast<int>(g.coeffs.size()) - 1);
    auto a = poly_antiderivative(g.coeffs[p]);
    a[0] += g.cum[p];
    // a is a polynomial in (x - knots[p]); express it in (x - local_origin).
    return poly_shift(a, local_origin - g.knots[p]);
}

PiecewiseDensity convolve_box(const PiecewiseDensity& g, double w) {
    std::vector<double> xs;
    xs.reserve(2 * g.knots.size());
    for (double x : g.knots) {
        xs.push_back(x - w);
        xs.push_back(x + w);
    }
    std::sort(xs.begin(), xs.end());
    const double span = xs.back() - xs.front();
    PiecewiseDensity out;
    for (double x : xs)
        if (out.knots.empty() || x - out.knots.back() > 1e-13 * span) out.knots.push_back(x);

    const double inv = 1.0 / (2.0 * w);
    for (size_t k = 0; k + 1 < out.knots.size(); ++k) {
        const double a = out.knots[k];
        const double mid = 0.5 * (a + out.knots[k + 1]);
        // h(x) = (A(x+w) - A(x-w)) / (2w); between adjacent knots both shifted
        // positions stay inside a single piece of g, so h is one polynomial.
        auto upper = antiderivative_poly_at(g, mid + w, a + w);
        auto lower = antiderivative_poly_at(g, mid - w, a - w);
        std::vector<double> piece(std::max(upper.size(), lower.size()), 0.0);
        for (size_t j = 0; j < upper.size(); ++j) piece[j] += inv * upper[j];
        for (size_t j = 0; j < lower.size(); ++j) piece[j] -= inv * lower[j];
        out.coeffs.push_back(std::move(piece));
    }
    rebuild_cumulative(out);
    return out;
}

}  // namespace

double PiecewiseDensity::pdf(double x) const {
    if (point_mass) return 0.0;
    if (knots.empty() || x < knots.front() || x > knots.back()) return 0.0;
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    int k = static_cast<int>(it - knots.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(coeffs.size()) - 1);
    return poly_eval(coeffs[k], x - knots[k]);
}

double PiecewiseDensity::cdf(double x) const {
    if (point_mass) return x < location ? 0.0 : 1.0;
    if (knots.empty() || x <= knots.front()) return 0.0;
    if (x >= knots.back()) return cum.back();
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    int k = static_cast<int>(it - knots.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(coeffs.size()) - 1);
    auto a = poly_antiderivative(coeffs[k]);
    return cum[k] + poly_eval(a, x - knots[k]);
}

PiecewiseDensity weighted_uniform_density(const std::vector<double>& weights, double delta,
                                          double center) {
    if (delta < 0.0) throw std::invalid_argument("uniform density: negative half-width");
    std::vector<double> widths;
    for (double w : weights) widths.push_back(delta * std::abs(w));
    std::sort(widths.begin(), widths.end(), std::greater<>());
    // Zero-width boxes are exact point masses and convolve away to nothing.
    while (!widths.empty() && widths.back() <= 1e-14 * widths.front()) widths.pop_back();
    if (widths.empty() || widths.front() == 0.0) {
        PiecewiseDensity d;
        d.point_mass = true;
        d.location = center;
        return d;
    }
    PiecewiseDensity d;
    d.knots = {-widths[0], widths[0]};
    d.coeffs = {{1.0 / (2.0 * widths[0])}};
    rebuild_cumulative(d);
    for (size_t i = 1; i < widths.size(); ++i) d = convolve_box(d, widths[i]);
    for (double& x : d.knots) x += center;
    return d;
}

PiecewiseDensity first_order_density(const ChainSpec& spec, double t, double delta,
                                     DensityComponent component) {
    const std::vector<cxd> c = dyson_coefficients(spec, t);
    const cxd f0 = transition_amplitude(spec, t).f;
    std::vector<double> weights(c.size());
    double center;
    if (component == DensityComponent::re) {
        for (size_t i = 0; i < c.size(); ++i) weights[i] = c[i].real();
        center = f0.real();
    } else {
        for (size_t i = 0; i < c.size(); ++i) weights[i] = c[i].imag();
        center = f0.imag();
    }
    return weighted_uniform_density(weights, delta, center);
}

double disorder_avg_recovery_fidelity(const ChainSpec& spec, double t, const DisorderSpec& dis,
                                      const Codespace& code) {
    if (code.phys_dim != 16 || logical_dim(code) != 2)
        throw std::invalid_argument("disorder recovery: need a 4-qubit code with one logical qubit");
    if (dis.delta == 0.0) return aqec_transfer_fidelity(transition_amplitude(spec, t), code);
    const std::vector<cxd> samples = disorder_sample(spec, t, dis);
    cxd fbar{0.0, 0.0};
    for (cxd f : samples) fbar += f;
    fbar /= static_cast<double>(samples.size());

    QuantumChannel mean_channel = tensor_power(induced_channel(make_transition_record(t, fbar)), 4);
    FactoredPetz fp = factored_petz(mean_channel, code);
    std::vector<double> fsq(samples.size());
    parallel_for(0, static_cast<std::int64_t>(samples.size()),
                 [&](std::int64_t lo, std::int64_t hi) {
                     for (std::int64_t m = lo; m < hi; ++m) {
                         QuantumChannel ch = tensor_power(
                             induced_channel(make_transition_record(t, samples[static_cast<size_t>(m)])), 4);
                         fsq[static_cast<size_t>(m)] = worst_case_fidelity_sq_factored(fp, ch.kraus);
                     }
                 });
    double total = 0.0;
    for (double v : fsq) total += v;
    return total / static_cast<double>(fsq.size());
}

double disorder_avg_fidelity_estimate(const ChainSpec& spec, double t, const DisorderSpec& dis,
                                      double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("fidelity estimate: alpha must be nonnegative");
    const std::vector<cxd> samples = disorder_sample(spec, t, dis);
    double total = 0.0;
    for (cxd f : samples) {
        const double p = 1.0 - std::norm(f);
        total += std::clamp(1.0 - alpha * p * p, 0.0, 1.0);
    }
    return total / static_cast<double>(samples.size());
}

}  // namespace aqec
