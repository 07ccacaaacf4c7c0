#include "aqec/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "aqec/kak.hpp"
#include "aqec/petz.hpp"
#include "aqec/util.hpp"

namespace aqec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_options(const NmOptions& opt) {
    if (!(opt.alpha > 0.0) || !(opt.beta > 1.0) || !(opt.delta > 0.0 && opt.delta < 1.0) ||
        !(opt.sigma > 0.0 && opt.sigma < 1.0))
        throw std::invalid_argument("nelder_mead: coefficients out of range");
    if (opt.max_iters < 0 || !(opt.spread_tol >= 0.0))
        throw std::invalid_argument("nelder_mead: bad iteration limits");
}

std::vector<double> axpy(const std::vector<double>& base, double scale,
                         const std::vector<double>& from, const std::vector<double>& to) {
    std::vector<double> out(base.size());
    for (size_t i = 0; i < base.size(); ++i) out[i] = base[i] + scale * (to[i] - from[i]);
    return out;
}

bool simplex_spans(const Simplex& s) {
    const int m = static_cast<int>(s.vertex[0].size());
    Eigen::MatrixXd edges(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) edges(i, j) = s.vertex[j + 1][i] - s.vertex[0][i];
    return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(edges).rank() == m;
}

}  // namespace

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                     const Simplex& initial, const NmOptions& opt) {
    check_options(opt);
    if (initial.vertex.empty() || initial.vertex[0].empty())
        throw std::invalid_argument("nelder_mead: empty simplex");
    const size_t m = initial.vertex[0].size();
    if (initial.vertex.size() != m + 1)
        throw std::invalid_argument("nelder_mead: need dim+1 vertices");
    for (const auto& v : initial.vertex)
        if (v.size() != m) throw std::invalid_argument("nelder_mead: ragged simplex");

    const auto eval = [&objective](const std::vector<double>& v) {
        const double f = objective(v);
        if (!std::isfinite(f)) throw std::runtime_error("nelder_mead: non-finite objective value");
        return f;
    };

    std::vector<std::vector<double>> x = initial.vertex;
    std::vector<double> f(m + 1);
    for (size_t i = 0; i <= m; ++i) f[i] = eval(x[i]);

    NmResult res;
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        // sort ascending; stable so equal values keep their submission order
        std::vector<size_t> order(m + 1);
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&f](size_t a, size_t b) { return f[a] < f[b]; });
        std::vector<std::vector<double>> xs(m + 1);
        std::vector<double> fs(m + 1);
        for (size_t i = 0; i <= m; ++i) {
            xs[i] = std::move(x[order[i]]);
            fs[i] = f[order[i]];
        }
        x = std::move(xs);
        f = std::move(fs);

        if (f[m] - f[0] < opt.spread_tol) break;

        std::vector<double> centroid(m, 0.0);
        for (size_t i = 0; i < m; ++i)
            for (size_t d = 0; d < m; ++d) centroid[d] += x[i][d] / static_cast<double>(m);

        const std::vector<double> xr = axpy(centroid, opt.alpha, x[m], centroid);
        const double fr = eval(xr);
        if (fr < f[0]) {
            const std::vector<double> xe = axpy(centroid, opt.beta, centroid, xr);
            const double fe = eval(xe);
            if (fe <= fr) {
                x[m] = xe;
                f[m] = fe;
            } else {
                x[m] = xr;
                f[m] = fr;
            }
        } else if (fr < f[m - 1]) {
            x[m] = xr;
            f[m] = fr;
        } else {
            const std::vector<double> xc = axpy(centroid, opt.delta, centroid, x[m]);
            const double fc = eval(xc);
            if (fc <= fr) {
                x[m] = xc;
                f[m] = fc;
            } else {
                for (size_t i = 1; i <= m; ++i) {
                    x[i] = axpy(x[0], opt.sigma, x[0], x[i]);
                    f[i] = eval(x[i]);
                }
            }
        }
        res.history.push_back(*std::min_element(f.begin(), f.end()));
    }

    const size_t best = static_cast<size_t>(
        std::distance(f.begin(), std::min_element(f.begin(), f.end())));
    res.best_x = x[best];
    res.best_value = f[best];
    return res;
}

Simplex random_simplex(int dim, double lo, double hi, std::mt19937_64& rng) {
    if (dim < 1 || !(hi > lo)) throw std::invalid_argument("random_simplex: bad domain");
    std::uniform_real_distribution<double> u(lo, hi);
    Simplex s;
    do {
        s.vertex.assign(dim + 1, std::vector<double>(dim));
        for (auto& v : s.vertex)
            for (double& d : v) d = u(rng);
    } while (!simplex_spans(s));
    return s;
}

namespace {

// Parameter vector -> encoding unitary under the configured mode. The
// nontrivial mode applies the fixed local layer after the nonlocal product.
Mat encoding_unitary(const SearchConfig& config, const std::vector<double>& x) {
    const bool trivial = config.mode != SearchMode::unstructured;
    const CartanParams params = CartanParams::from_vector(config.n_qubits, trivial, x);
    Mat u = build_unitary(params);
    if (config.mode == SearchMode::structured_nontrivial) {
        Mat layer = Mat::Identity(1, 1);
        for (int q = 0; q < config.n_qubits; ++q) layer = kron(layer, config.local);
        u = layer * u;
    }
    return u;
}

}  // namespace

double search_objective(const QuantumChannel& channel, const SearchConfig& config,
                        const std::vector<double>& x) {
    const Codespace code = encode_standard(encoding_unitary(config, x));
    const FactoredPetz fp = factored_petz(channel, code);
    const Eigen::Matrix3d t = t_matrix_factored(fp, channel.kraus);
    const Eigen::Matrix3d sym = 0.5 * (t + t.transpose());
    const double t_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(sym).eigenvalues()(0);
    return 0.5 * (1.0 - t_min);
}

SearchResult run_search(const QuantumChannel& channel, const SearchConfig& config) {
    check_options(config.nm);
    if (config.n_qubits < 2 || config.n_qubits > 4)
        throw std::invalid_argument("run_search: n_qubits must be 2, 3 or 4");
    const int dim = 1 << config.n_qubits;
    if (channel.dim_in != dim || channel.dim_out != dim)
        throw std::invalid_argument("run_search: channel dimension does not match n_qubits");
    if (config.restarts < 1) throw std::invalid_argument("run_search: restarts must be >= 1");
    if (config.mode == SearchMode::structured_nontrivial &&
        (config.local.rows() != 2 || config.local.cols() != 2 || !is_unitary(config.local, 1e-8)))
        throw std::invalid_argument("run_search: nontrivial mode needs a 2x2 unitary local");

    const bool trivial = config.mode != SearchMode::unstructured;
    const int m = CartanParams::param_count(config.n_qubits, trivial);
    const auto objective = [&](const std::vector<double>& x) {
        return search_objective(channel, config, x);
    };

    std::vector<NmResult> runs(config.restarts);
    std::mutex guard;
    parallel_for(0, config.restarts, [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            std::mt19937_64 rng(config.seed ^ (0x9E3779B97F4A7C15ULL * (r + 1)));
            const Simplex start = random_simplex(m, 0.0, kTwoPi, rng);
            NmResult run = nelder_mead(objective, start, config.nm);
            std::lock_guard<std::mutex> lock(guard);
            runs[r] = std::move(run);
        }
    });

    int best = 0;
    for (int r = 1; r < config.restarts; ++r)
        if (runs[r].best_value < runs[best].best_value) best = r;

    SearchResult out;
    out.best_loss = runs[best].best_value;
    out.best_x = runs[best].best_x;
    out.trace = std::move(runs[best].history);
    out.iterations = static_cast<int>(out.trace.size());
    out.winning_restart = best;

    out.code = encode_standard(encoding_unitary(config, out.best_x));
    return out;
}

}  // namespace aqec
