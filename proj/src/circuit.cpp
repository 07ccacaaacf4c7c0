#include "aqec/circuit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aqec {

namespace {

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "Sdg";
        case GateKind::Hdg: return "Hdg";
        case GateKind::CNOT: return "CNOT";
        case GateKind::Rz: return "Rz";
    }
    throw std::logic_error("kind_name: unknown gate kind");
}

// I ... A ... I with A on `wire` (1-based, wire 1 most significant).
Mat embed1(const Mat& a, int wire, int n_wires) {
    Mat m = Mat::Identity(1, 1);
    for (int w = 1; w <= n_wires; ++w)
        m = kron(m, w == wire ? a : Mat::Identity(2, 2));
    return m;
}

Mat cnot_matrix(int control, int target, int n_wires) {
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return embed1(p0, control, n_wires) +
           embed1(p1, control, n_wires) * embed1(pauli_x(), target, n_wires);
}

void check_wire(int wire, int n_wires) {
    if (wire < 1 || wire > n_wires)
        throw std::invalid_argument("circuit: wire index out of range");
}

// CNOT(1,2), CNOT(2,3), Rz(2c) on wire 3, then the ladder undone: realizes
// exp(-i c ZZZ) exactly under Rz(a) = diag(e^{-ia/2}, e^{ia/2}).
void ladder(std::vector<Gate>& g, double c) {
    g.push_back({GateKind::CNOT, 1, 2, 0.0});
    g.push_back({GateKind::CNOT, 2, 3, 0.0});
    g.push_back({GateKind::Rz, 3, 0, 2.0 * c});
    g.push_back({GateKind::CNOT, 2, 3, 0.0});
    g.push_back({GateKind::CNOT, 1, 2, 0.0});
}

void zzz_term(std::vector<Gate>& g, double c) {
    if (c == 0.0) return;
    ladder(g, c);
}

void xxz_term(std::vector<Gate>& g, double c) {
    if (c == 0.0) return;
    g.push_back({GateKind::H, 1, 0, 0.0});
    g.push_back({GateKind::H, 2, 0, 0.0});
    ladder(g, c);
    g.push_back({GateKind::H, 1, 0, 0.0});
    g.push_back({GateKind::H, 2, 0, 0.0});
}

void yyz_term(std::vector<Gate>& g, double c) {
    if (c == 0.0) return;
    g.push_back({GateKind::S, 1, 0, 0.0});
    g.push_back({GateKind::S, 2, 0, 0.0});
    ladder(g, c);
    g.push_back({GateKind::Sdg, 1, 0, 0.0});
    g.push_back({GateKind::Sdg, 2, 0, 0.0});
}

// F = exp(-i(f0 XXZ + f1 YYZ + f2 ZZZ)); commuting terms, emitted in order.
void f_factor(std::vector<Gate>& g, const std::array<double, 3>& f) {
    xxz_term(g, f[0]);
    yyz_term(g, f[1]);
    zzz_term(g, f[2]);
}

// J = exp(-i(a0 XXX + a1 YYX + a2 ZZX + a3 IIX)): the F templates wrapped in H
// on wire 3 (H Z H = X), plus a bare Rz(2 a3) on wire 3 for the IIX term.
void j_factor(std::vector<Gate>& g, const std::array<double, 4>& a) {
    if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0 && a[3] == 0.0) return;
    g.push_back({GateKind::H, 3, 0, 0.0});
    xxz_term(g, a[0]);
    yyz_term(g, a[1]);
    zzz_term(g, a[2]);
    if (a[3] != 0.0) g.push_back({GateKind::Rz, 3, 0, 2.0 * a[3]});
    g.push_back({GateKind::H, 3, 0, 0.0});
}

}  // namespace

Mat gate_matrix(GateKind kind) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::H:
        case GateKind::Hdg: {
            Mat h(2, 2);
            h << 1.0, 1.0, 1.0, -1.0;
            return inv_sqrt2 * h;
        }
        case GateKind::S:
            return inv_sqrt2 * (Mat::Identity(2, 2) + I_UNIT * pauli_x());
        case GateKind::Sdg:
            return inv_sqrt2 * (Mat::Identity(2, 2) - I_UNIT * pauli_x());
        default:
            throw std::invalid_argument("gate_matrix: not a fixed single-qubit gate");
    }
}

Mat circuit_matrix(const CircuitDescription& c) {
    const int dim = 1 << c.n_wires;
    Mat m = Mat::Identity(dim, dim);
    for (const Gate& g : c.gates) {
        check_wire(g.wire, c.n_wires);
        Mat full;
        switch (g.kind) {
            case GateKind::CNOT:
                check_wire(g.target, c.n_wires);
                if (g.target == g.wire)
                    throw std::invalid_argument("circuit: CNOT control equals target");
                full = cnot_matrix(g.wire, g.target, c.n_wires);
                break;
            case GateKind::Rz: {
                if (!std::isfinite(g.angle))
                    throw std::invalid_argument("circuit: non-finite Rz angle");
                Mat r = Mat::Zero(2, 2);
                r(0, 0) = std::exp(-I_UNIT * (g.angle / 2.0));
                r(1, 1) = std::exp(I_UNIT * (g.angle / 2.0));
                full = embed1(r, g.wire, c.n_wires);
                break;
            }
            default:
                full = embed1(gate_matrix(g.kind), g.wire, c.n_wires);
        }
        m = full * m;
    }
    return m;
}

std::string to_text(const CircuitDescription& c) {
    std::ostringstream out;
    out.precision(17);
    for (const Gate& g : c.gates) {
        out << kind_name(g.kind) << ' ' << g.wire;
        if (g.kind == GateKind::CNOT) out << ',' << g.target;
        if (g.kind == GateKind::Rz) out << ' ' << g.angle;
        out << '\n';
    }
    return out.str();
}

CircuitDescription emit_circuit(const CartanParams& params) {
    if (params.n_qubits() != 3)
        throw std::invalid_argument("emit_circuit: only the three-qubit form is supported");
    if (!params.trivial_locals)
        throw std::invalid_argument("emit_circuit: nontrivial local factors are unsupported");
    const Kak3& p = std::get<Kak3>(params.form);
    CircuitDescription c;
    c.n_wires = 3;
    // U = F1 J F2 as a matrix product, so F2's gates act first in time.
    f_factor(c.gates, p.f2);
    j_factor(c.gates, p.a);
    f_factor(c.gates, p.f1);
    return c;
}

}  // namespace aqec
