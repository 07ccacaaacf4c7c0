#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aqec/linalg.hpp"

namespace aqec {

// CPTP map as an ordered Kraus list. All constructors verify trace preservation
// (sum K†K = I within 1e-10) and drop all-zero Kraus operators.
struct QuantumChannel {
    int dim_in = 0;
    int dim_out = 0;
    std::vector<Mat> kraus;
};

inline constexpr double kCptpTol = 1e-10;

// Damping axis on the Bloch sphere: |v> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>.
struct DampingDirection {
    double theta = 0.0;  // [0, π]
    double phi = 0.0;    // [0, 2π]
};

QuantumChannel identity_channel(int dim);

// E0 = diag(1, √(1−p)), E1 = √p |0><1|.
QuantumChannel make_amplitude_damping(double p);

// Damping toward |v> instead of |0>: E0' = |v><v| + √(1−γ)|v⊥><v⊥|, E1' = √γ|v><v⊥|.
QuantumChannel make_rotated_amplitude_damping(double gamma, const DampingDirection& dir);

// (1−α)·id + α·Φ with Φ a Haar-random qubit channel (random two-qubit unitary on
// system ⊗ |0> ancilla, ancilla traced out). Deterministic per seed.
QuantumChannel make_random_channel(double alpha, std::uint64_t seed);

// name ∈ {bitflip, phaseflip, depolarizing}.
QuantumChannel make_named(const std::string& name, double p);

QuantumChannel tensor(const std::vector<QuantumChannel>& channels);
QuantumChannel tensor_power(const QuantumChannel& c, int n);

bool is_cptp(const QuantumChannel& c, double tol = kCptpTol);

// Σ_i K_i ρ K_i†. Requires Hermitian ρ of matching dimension.
Mat apply_channel(const QuantumChannel& c, const Mat& rho);

// Kraus action on an arbitrary (not necessarily Hermitian/normalized) operator.
Mat apply_raw(const QuantumChannel& c, const Mat& op);

// second ∘ first: Kraus set {S_j F_i}, lexicographic in (j, i).
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

// Haar-random unitary via QR of a complex Gaussian matrix with R-diagonal phase fix.
Mat haar_unitary(int dim, std::mt19937_64& rng);

}  // namespace aqec
