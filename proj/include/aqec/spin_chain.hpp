#pragma once

#include <cstdint>
#include <vector>

#include "aqec/channel.hpp"
#include "aqec/codes.hpp"

namespace aqec {

// Nearest-neighbour spin-preserving chain. hop holds the xy exchange couplings,
// zz the Ising couplings, field the on-site field strengths; energies are in
// units of the mean coupling and hbar = 1. Sites are 1-based.
struct ChainSpec {
    int n_sites = 0;
    std::vector<double> hop;    // length n_sites - 1
    std::vector<double> zz;     // length n_sites - 1
    std::vector<double> field;  // length n_sites
    int sender = 1;
    int receiver = 1;
};

// Uniform chain with hop = zz = 1/2 and zero field.
ChainSpec xxx_chain(int n_sites, int sender, int receiver);

// Transfer amplitude f = <receiver| exp(-iHt) |sender> in the single-flip
// sector, with the phase measured relative to the evolved ground state.
// Invariant: magnitude <= 1 + 1e-9.
struct TransitionRecord {
    double t = 0.0;
    cxd f{};
    double magnitude = 0.0;
    double phase = 0.0;
};

// Fills magnitude/phase from f; throws if |f| exceeds 1 + 1e-9.
TransitionRecord make_transition_record(double t, cxd f);

// I.i.d. uniform coupling perturbations Delta_k on [-delta, delta].
struct DisorderSpec {
    double delta = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
};

// H restricted to the single-flip states, relative to the ground-state energy:
// diagonal 2(zz_{l-1} + zz_l) - 2 field_l, hopping -2 hop_l. Exactly symmetric.
Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec);

// Propagator exp(-iHt) in the single-flip basis; unitary and symmetric.
Mat transition_matrix(const ChainSpec& spec, double t);

TransitionRecord transition_amplitude(const ChainSpec& spec, double t);

// Record at the argmax of |f| over the grid {dt, 2dt, ..., <= t_max}.
TransitionRecord optimal_transfer_time(const ChainSpec& spec, double t_max, double dt = 0.01);

// E0 = diag(1, f), E1 = sqrt(1 - |f|^2)|0><1|. Throws if |f| > 1 + 1e-9.
QuantumChannel induced_channel(const TransitionRecord& rec);

// Worst-case squared fidelity of the bare single-chain protocol with the
// receiver phase compensated: |f|^2.
double noqec_fidelity(const TransitionRecord& rec);

// Worst-case squared fidelity of transfer across parallel chains, one code
// qubit per chain, with the matched Petz recovery. The number of chains is
// log2 of the code's physical dimension (2..5 supported).
double aqec_transfer_fidelity(const TransitionRecord& rec, const Codespace& code);

// k rounds of a hop with per-round loss alpha p^2: F^2 = (1 - alpha p^2)^k.
// Throws when alpha p^2 > 1 or the arguments are out of range.
double repeated_qec(double p, double alpha, int k);

// First-order response of the uniform-chain amplitude to the per-bond coupling
// perturbations: f(Delta) = f(0) + sum_i c_i Delta_i + O(Delta^2), where bond i
// scales hop_i = zz_i = (1 + Delta_i)/2. Composite Simpson quadrature of the
// interaction-picture integral, 2000 panels. Requires the uniform chain.
std::vector<cxd> dyson_coefficients(const ChainSpec& spec, double t);

// n_samples exact evolutions of the perturbed uniform chain; deterministic
// under seed, with streams split per sample index. Requires the uniform chain.
std::vector<cxd> disorder_sample(const ChainSpec& spec, double t, const DisorderSpec& dis);

enum class DensityComponent { re, im };

// Piecewise-polynomial probability density: coeffs[k] are power-basis
// coefficients in (x - knots[k]) on [knots[k], knots[k+1]); zero outside the
// knot range. cum[k] is the mass strictly before piece k (cum.back() ~ 1).
// A degenerate distribution is flagged as a point mass at `location`.
struct PiecewiseDensity {
    bool point_mass = false;
    double location = 0.0;
    std::vector<double> knots;
    std::vector<std::vector<double>> coeffs;
    std::vector<double> cum;

    double pdf(double x) const;
    double cdf(double x) const;
};

// Exact density of center + sum_i w_i U_i with U_i i.i.d. uniform on
// [-delta, delta], built by iterated convolution of boxes. All-zero weights
// give a point mass.
PiecewiseDensity weighted_uniform_density(const std::vector<double>& weights, double delta,
                                          double center);

// Density of the chosen component of the first-order amplitude
// f(0) + sum_i c_i Delta_i at disorder strength delta.
PiecewiseDensity first_order_density(const ChainSpec& spec, double t, double delta,
                                     DensityComponent component);

// Mean worst-case squared fidelity of the 4-chain protocol when the recovery
// is built once from the sample-mean amplitude and applied to every sampled
// realization. Requires a 4-qubit code with 2-dimensional logical space.
double disorder_avg_recovery_fidelity(const ChainSpec& spec, double t, const DisorderSpec& dis,
                                      const Codespace& code);

// Mean of the single-shot protocol law 1 - alpha p^2 over sampled realizations
// (p = 1 - |f|^2 per realization), clamped to [0, 1]. alpha = 7/4 is the
// 4-chain protocol; 15/8 the 5-chain one. This is the leading-order estimate
// whose break-even against the bare chain sits at p = 1/alpha.
double disorder_avg_fidelity_estimate(const ChainSpec& spec, double t, const DisorderSpec& dis,
                                      double alpha = 1.75);

}  // namespace aqec
