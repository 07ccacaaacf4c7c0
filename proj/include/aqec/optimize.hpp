#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/codes.hpp"
#include "aqec/linalg.hpp"

namespace aqec {

// m+1 vertices of dimension m with their objective values.
struct Simplex {
    std::vector<std::vector<double>> vertex;
    std::vector<double> value;
};

struct NmOptions {
    double alpha = 1.0;  // reflection
    double beta = 2.0;   // expansion
    double delta = 0.5;  // contraction
    double sigma = 0.5;  // shrink
    int max_iters = 50000;
    double spread_tol = 1e-9;
};

struct NmResult {
    std::vector<double> best_x;
    double best_value = 0.0;
    std::vector<double> history;  // best objective value after each iteration
};

// Downhill simplex: sort, reflect, then exactly one of expand / accept /
// contract / shrink per iteration. Stops when the value spread across the
// simplex falls below spread_tol or max_iters is reached. Throws on non-finite
// objective values or coefficient ranges outside alpha>0, beta>1, 0<delta<1,
// 0<sigma<1.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                     const Simplex& initial, const NmOptions& opt);

// Uniform draws from [lo, hi)^dim; redrawn until the edge vectors span the
// space, so the simplex cannot start degenerate.
Simplex random_simplex(int dim, double lo, double hi, std::mt19937_64& rng);

enum class SearchMode { structured_trivial, structured_nontrivial, unstructured };

struct SearchConfig {
    SearchMode mode = SearchMode::structured_trivial;
    int n_qubits = 4;
    NmOptions nm;
    int restarts = 20;
    std::uint64_t seed = 0;
    Mat local;  // fixed per-qubit 2x2 local layer, structured_nontrivial only
};

struct SearchResult {
    Codespace code;
    double best_loss = 0.0;
    std::vector<double> best_x;
    std::vector<double> trace;  // history of the winning restart
    int iterations = 0;         // iterations used by the winning restart
    int winning_restart = 0;
};

// Fidelity loss of the candidate code encoded by the mode's unitary at x,
// recovered with the code's own adapted map.
double search_objective(const QuantumChannel& channel, const SearchConfig& config,
                        const std::vector<double>& x);

// Best code over `restarts` independently seeded downhill-simplex runs.
// Deterministic for a fixed (config, seed); ties go to the lowest restart
// index. Restarts run in parallel.
SearchResult run_search(const QuantumChannel& channel, const SearchConfig& config);

}  // namespace aqec
