#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aqec/codes.hpp"
#include "aqec/linalg.hpp"

namespace aqec {

// Elementary physical operations. Every instance placed in a gadget is one
// fault location; |0> preparations are noiseless and are modelled as wire
// initial states rather than locations.
enum class LocKind { prep0, prepPlus, cnot, cz, x, z, h, rest, measZ, measX };

// Classical measurement record of a branch, keyed by hierarchical bit names
// such as "ec1.s".
using BitMap = std::map<std::string, int>;

// One time-ordered physical operation. Conditional operations carry a
// predicate over previously produced bits (null = unconditional). Operations
// whose wire is chosen by earlier syndrome outcomes carry a resolver returning
// the wire index per branch, or -1 when the operation degenerates to identity
// on that branch. Measurements store the emitted bit name; emits_alt replaces
// it when the branch bit named alt_when_zero reads 0.
struct Location {
    LocKind kind = LocKind::rest;
    int wire = -1;
    int wire2 = -1;  // cnot target / second cz wire
    int time_step = 0;
    int part = 0;  // parity round = 1, conditional recovery = 2 (error-correction units)
    std::function<bool(const BitMap&)> cond;
    std::string cond_desc;
    std::function<int(const BitMap&)> resolve;
    std::function<int(const BitMap&)> resolve2;
    std::string emits, emits_alt, alt_when_zero;
    std::string label;
};

struct Wire {
    std::string name;
    bool is_data = false;
    int bell_partner = -1;  // jointly initialized to (|00>+|11>)/sqrt(2) when >= 0
};

// Time-ordered circuit with classically controlled sections. Wires not listed
// in data_wires are ancillas starting in |0> (or a Bell pair). Ancilla wires
// are reset to |0> by their measurement, so later sections may reuse them.
struct GadgetGraph {
    std::string name;
    std::vector<Wire> wires;
    std::vector<Location> locs;
    std::vector<int> data_wires;  // block-major logical qubit carriers
    int n_blocks = 1;
    // (s-bit, t-bit) name pairs that stop the computation when both read 1.
    std::vector<std::array<std::string, 2>> halt_pairs;
    // Bit-name prefixes of embedded error-correction units, outermost first.
    std::vector<std::string> ec_prefixes;
    // Prefix whose bits populate BranchOutcome.syndromes.
    std::string syndrome_prefix;
    std::vector<std::string> notes;

    int census(LocKind k) const;
    int total_locations() const;
    int part_locations(int part) const;
};

// Known names: ec_unit, recovery_R, memory, bell_prep, xbar_meas, zbar_meas,
// logical_x, cz_gadget, cz_exrec. Throws on anything else.
GadgetGraph build_gadget(const std::string& name);

// Bits of the leading error-correction flow: u,h exist only on the s-branch
// (s=1, t=0), v,g only on the t-branch, c only when the phase-recovery
// measurement ran; -1 = not produced.
struct SyndromeOutcome {
    int s = -1, t = -1, u = -1, h = -1, v = -1, g = -1, c = -1;
};

struct FaultSpec {
    int location = 0;
    enum Kind { damp, phase } kind = damp;
    int placement = 0;  // two-qubit gates: 0 = first wire, 1 = second, 2 = both
};

struct BranchOutcome {
    Vec state;  // data-wire state, renormalized; ancillas are measured/reset
    BitMap bits;
    SyndromeOutcome syndromes;
    bool halted = false;    // double-parity stop fired
    bool rejected = false;  // preparation verifier rejected the output
    std::string verdict;    // measurement gadgets: "+","-","0","1","flagged"
    double probability = 0.0;
};

// Statevector propagation with measurement branching; zero-amplitude branches
// are pruned. input_logical holds 2 amplitudes per block (empty for
// preparation gadgets). A damp fault inserts the unnormalized lowering
// operator |0><1| on the wire after the location (before it for measurements);
// a phase fault inserts Z. input_damps lists 0-based data qubits damped before
// the gadget. kraus_p in (0,1) replaces the bare insertion by the full
// two-operator damping pair with that strength, branching on both, so that
// branch probabilities sum to the input norm.
std::vector<BranchOutcome> inject_and_propagate(const GadgetGraph& g, const Vec& input_logical,
                                                const std::vector<FaultSpec>& faults,
                                                const std::vector<int>& input_damps = {},
                                                double kraus_p = -1.0);

// True iff a fault-free error-correction pass over each block maps state to
// the encoding of target_logical with fidelity 1 within 1e-9 on every
// measurement branch (a double-parity halt during the pass counts as failure).
// state has 16 amplitudes per block; target_logical 2 per block.
bool check_correctable(const Vec& state, const Vec& target_logical);

struct CaseRecord {
    std::string gadget;
    std::vector<int> fault_locations;
    int placement = 0;
    std::string kind;  // "damp", "none"
    std::vector<int> input_damps;
    std::string input_label;
    SyndromeOutcome syndromes;
    std::string verdict;
    bool pass = true;
    std::string detail;
};

struct PropertyReport {
    std::string gadget, property;
    bool pass = true;
    long long cases = 0, branches = 0;
    CaseRecord first_counterexample;  // meaningful when !pass
};

// Exhaustive single-error enumeration over a basis of logical inputs
// {|0_L>,|1_L>,|+_L>,|-_L>} per block.
//   P1 (ec_unit):   no fault; 0 or 1 input damping error; output must equal
//                   the input state exactly.
//   P2 (ec_unit):   clean input; 0 or 1 internal fault over all locations and
//                   placements; every surviving branch halts or is correctable.
//   P3 (bell_prep): 0 or 1 internal fault; accepted branches must hold the
//                   Bell state up to at most one damping error.
//   P4 (xbar_meas, zbar_meas): both families; definite inputs must read out
//                   correctly on every branch, all patterns must decode.
//   P5 (logical_x, cz_gadget): both families; output must match the ideal
//                   logical action up to one damping error per block (or halt).
PropertyReport verify_property(const std::string& gadget_name, const std::string& property_id);

struct LedgerEntry {
    std::string block_pair;
    long long count = 0;
    std::string derivation;
    bool in_total = true;
    std::string note;
};

struct LedgerReport {
    std::string unit;
    std::vector<LedgerEntry> entries;
    long long damping_pairs = 0;  // malignant second-order damping pairs in A
    long long z_locations = 0;    // locations whose single phase fault is already second order
    long long A = 0;              // failure coefficient: failure rate = A p^2
    double p_th = 0.0;            // break-even rate 1/A
};

// Malignant-pair tally for unit "memory" or "cz_exrec". Every entry's count is
// the evaluated value of its derivation expression; A sums the in_total
// entries.
LedgerReport ledger(const std::string& unit);

// Integer arithmetic over + - * parentheses and the binomial C(n,k); keeps
// ledger counts and their derivations from drifting apart.
long long eval_count_expression(const std::string& expr);

}  // namespace aqec
