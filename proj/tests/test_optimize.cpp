#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "aqec/channel.hpp"
#include "aqec/circuit.hpp"
#include "aqec/codes.hpp"
#include "aqec/optimize.hpp"
#include "aqec/petz.hpp"

using namespace aqec;

namespace {

double rosenbrock(const std::vector<double>& v) {
    const double a = 1.0 - v[0];
    const double b = v[1] - v[0] * v[0];
    return a * a + 100.0 * b * b;
}

bool non_increasing(const std::vector<double>& h) {
    for (size_t i = 1; i < h.size(); ++i)
        if (h[i] > h[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("convex quadratic is driven below 1e-8 within 500 iterations") {
    std::mt19937_64 rng(21);
    const auto sq = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double d : v) s += d * d;
        return s;
    };
    NmOptions opt;
    opt.max_iters = 500;
    const NmResult res = nelder_mead(sq, random_simplex(6, -2.0, 2.0, rng), opt);
    CHECK(res.best_value < 1e-8);
    CHECK(non_increasing(res.history));
}

TEST_CASE("constant objective stops at once through the spread criterion") {
    std::mt19937_64 rng(22);
    const NmResult res = nelder_mead([](const std::vector<double>&) { return 3.5; },
                                     random_simplex(4, 0.0, 1.0, rng), NmOptions{});
    CHECK(res.history.empty());
    CHECK(res.best_value == 3.5);
}

TEST_CASE("rosenbrock valley is followed to the global minimum") {
    // Classic start (-1.2, 1); a reference downhill-simplex run lands on (1, 1).
    Simplex s;
    s.vertex = {{-1.2, 1.0}, {-1.15, 1.0}, {-1.2, 1.05}};
    const NmResult res = nelder_mead(rosenbrock, s, NmOptions{});
    CHECK(std::abs(res.best_x[0] - 1.0) < 1e-4);
    CHECK(std::abs(res.best_x[1] - 1.0) < 1e-4);
    CHECK(non_increasing(res.history));
}

TEST_CASE("non-finite objective values are refused") {
    std::mt19937_64 rng(23);
    const auto bad = [](const std::vector<double>& v) {
        return v[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    CHECK_THROWS_AS(nelder_mead(bad, random_simplex(2, -1.0, 1.0, rng), NmOptions{}),
                    std::runtime_error);
}

TEST_CASE("coefficient ranges are validated") {
    std::mt19937_64 rng(24);
    const auto sq = [](const std::vector<double>& v) { return v[0] * v[0]; };
    NmOptions opt;
    opt.beta = 0.5;
    CHECK_THROWS_AS(nelder_mead(sq, random_simplex(1, 0.0, 1.0, rng), opt),
                    std::invalid_argument);
    opt = NmOptions{};
    opt.delta = 1.5;
    CHECK_THROWS_AS(nelder_mead(sq, random_simplex(1, 0.0, 1.0, rng), opt),
                    std::invalid_argument);
}

TEST_CASE("random simplices span the search space") {
    std::mt19937_64 rng(25);
    for (int dim : {2, 5, 22}) {
        const Simplex s = random_simplex(dim, 0.0, 6.28, rng);
        REQUIRE(s.vertex.size() == static_cast<size_t>(dim + 1));
        Eigen::MatrixXd edges(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) edges(i, j) = s.vertex[j + 1][i] - s.vertex[0][i];
        CHECK(Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(edges).rank() == dim);
    }
}

TEST_CASE("search is deterministic for a fixed seed and config") {
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 3);
    SearchConfig cfg;
    cfg.mode = SearchMode::structured_trivial;
    cfg.n_qubits = 3;
    cfg.restarts = 2;
    cfg.seed = 7;
    cfg.nm.max_iters = 300;
    const SearchResult a = run_search(noise, cfg);
    const SearchResult b = run_search(noise, cfg);
    CHECK(a.best_loss == b.best_loss);
    CHECK(a.best_x == b.best_x);
    CHECK(a.trace == b.trace);
    CHECK(a.winning_restart == b.winning_restart);
    validate_codespace(a.code, 1e-10);
    CHECK(non_increasing(a.trace));

    // the reported loss is reproducible from the returned code
    const QuantumChannel rec = petz_recovery(noise, a.code);
    CHECK(fidelity_loss(noise, rec, a.code) == doctest::Approx(a.best_loss).epsilon(1e-9));
}

TEST_CASE("structured three-qubit search beats the fixed three-qubit code") {
    const double gamma = 0.1;
    const QuantumChannel noise = tensor_power(make_amplitude_damping(gamma), 3);
    const Codespace known = ad_3qubit_code();
    const double known_loss = fidelity_loss(noise, petz_recovery(noise, known), known);

    SearchConfig cfg;
    cfg.mode = SearchMode::structured_trivial;
    cfg.n_qubits = 3;
    cfg.restarts = 10;
    cfg.seed = 11;
    const SearchResult res = run_search(noise, cfg);
    CHECK(res.best_loss <= known_loss + 1e-6);
    validate_codespace(res.code, 1e-10);
}

TEST_CASE("x-axis damping favors hadamard-frame locals over trivial ones") {
    const double gamma = 0.1;
    constexpr double pi = 3.14159265358979323846;
    const QuantumChannel noise =
        tensor_power(make_rotated_amplitude_damping(gamma, {pi / 2.0, 0.0}), 4);

    SearchConfig cfg;
    cfg.n_qubits = 4;
    cfg.restarts = 5;
    cfg.seed = 3;

    cfg.mode = SearchMode::structured_trivial;
    const SearchResult trivial = run_search(noise, cfg);

    cfg.mode = SearchMode::structured_nontrivial;
    cfg.local = gate_matrix(GateKind::H);
    const SearchResult rotated = run_search(noise, cfg);

    CHECK(rotated.best_loss <= trivial.best_loss + 1e-9);
    validate_codespace(rotated.code, 1e-10);
}

TEST_CASE("search configuration is validated") {
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 3);
    SearchConfig cfg;
    cfg.n_qubits = 5;
    CHECK_THROWS_AS(run_search(noise, cfg), std::invalid_argument);
    cfg.n_qubits = 4;  // dimension mismatch with a 3-qubit channel
    CHECK_THROWS_AS(run_search(noise, cfg), std::invalid_argument);
    cfg.n_qubits = 3;
    cfg.mode = SearchMode::structured_nontrivial;  // missing local unitary
    CHECK_THROWS_AS(run_search(noise, cfg), std::invalid_argument);
}
