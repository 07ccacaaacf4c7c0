#pragma once

#include <string>
#include <vector>

#include "aqec/kak.hpp"
#include "aqec/linalg.hpp"

namespace aqec {

// Gate alphabet of the emitted encoding circuits. S here denotes (I + i X)/sqrt(2),
// the conjugation with Sdg Z S = -Y: paired S / Sdg layers around a Z-parity
// ladder turn a pair of Z factors into Y factors with no change of angle.
enum class GateKind { H, S, Sdg, Hdg, CNOT, Rz };

struct Gate {
    GateKind kind = GateKind::H;
    int wire = 1;        // 1-based; control wire for CNOT
    int target = 0;      // CNOT target wire, unused otherwise
    double angle = 0.0;  // Rz only
};

struct CircuitDescription {
    int n_wires = 0;
    std::vector<Gate> gates;  // gates[0] acts first in time
};

// Dense matrix of one single-qubit gate kind.
Mat gate_matrix(GateKind kind);

// Dense matrix of the whole circuit (product of embedded gates, later gates on
// the left). Wire 1 is the most significant tensor factor.
Mat circuit_matrix(const CircuitDescription& c);

// One gate per line: "KIND wire[,wire] [angle]".
std::string to_text(const CircuitDescription& c);

// Gate realization of the three-qubit trivial-locals form U = F1 J F2.
// Each Pauli-word exponential becomes a CNOT parity ladder with Rz(2c) on the
// last wire, conjugated by H (X words) or S (Y words) layers; the J factor is
// wrapped in H on wire 3 to turn its trailing Z into X. Terms with zero
// coefficient are skipped. Throws for n != 3 or nontrivial locals.
CircuitDescription emit_circuit(const CartanParams& params);

}  // namespace aqec
