#pragma once

#include <array>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "aqec/codes.hpp"
#include "aqec/linalg.hpp"

namespace aqec {

// exp(-i theta P) = cos(theta) I - i sin(theta) P, valid because P^2 = I for
// every Pauli word. Throws on letters outside {I,X,Y,Z}.
Mat pauli_string_exp(const std::string& word, double theta);

// ZYZ Euler angles: Rz(alpha) Ry(beta) Rz(gamma), determinant exactly 1.
struct Su2Params {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

Mat su2_matrix(const Su2Params& p);

// Two-qubit form (left1 (x) left2) exp(-i(c0 XX + c1 YY + c2 ZZ)) (right1 (x) right2).
struct Kak2 {
    Su2Params left1, left2;
    std::array<double, 3> c{};
    Su2Params right1, right2;
};

// Local slot of the three-qubit form: SU(4) on wires 1-2 tensor SU(2) on wire 3.
struct KSlot3 {
    Kak2 head;
    Su2Params tail;
};

// Three-qubit form K1 F1 K2 J K3 F2 K4 with
//   F = exp(-i(f0 XXZ + f1 YYZ + f2 ZZZ)),
//   J = exp(-i(a0 XXX + a1 YYX + a2 ZZX + a3 IIX)).
// The generator set inside each factor commutes, so each factor is the ordered
// product of the individual Pauli-word exponentials.
struct Kak3 {
    std::array<KSlot3, 4> k;
    std::array<double, 3> f1{};
    std::array<double, 4> a{};
    std::array<double, 3> f2{};
};

// Local slot of the four-qubit form: SU(8) on wires 1-3 tensor SU(2) on wire 4.
struct KSlot4 {
    Kak3 head;
    Su2Params tail;
};

// Four-qubit form K1 F1 K2 J K3 F2 K4 with
//   F = exp(-i(f0 XXIZ + f1 YYIZ + f2 ZZIZ + f3 IIXZ + f4 XXXZ + f5 YYXZ + f6 ZZXZ)),
//   J = exp(-i(a0 IIIX + a1 XXIX + a2 YYIX + a3 ZZIX + a4 IIXX + a5 XXXX + a6 YYXX + a7 ZZXX)).
struct Kak4 {
    std::array<KSlot4, 4> k;
    std::array<double, 7> f1{};
    std::array<double, 8> a{};
    std::array<double, 7> f2{};
};

// Parameter set of an encoding unitary on 2, 3 or 4 qubits. With
// trivial_locals the K slots are identity and only the nonlocal coefficient
// vectors contribute (three-qubit case: U = F1 J F2).
//
// The flat vector layout follows product order, locals first where present:
//   Su2   -> alpha, beta, gamma
//   Kak2  -> left1, left2, c[3], right1, right2           (15; trivial: 3)
//   KSlot -> head, tail
//   Kak3  -> k1, f1[3], k2, a[4], k3, f2[3], k4           (82; trivial: 10)
//   Kak4  -> k1, f1[7], k2, a[8], k3, f2[7], k4           (362; trivial: 22)
struct CartanParams {
    bool trivial_locals = false;
    std::variant<Kak2, Kak3, Kak4> form = Kak2{};

    int n_qubits() const { return 2 + static_cast<int>(form.index()); }

    static CartanParams zero(int n_qubits, bool trivial_locals);
    static int param_count(int n_qubits, bool trivial_locals);

    std::vector<double> to_vector() const;
    static CartanParams from_vector(int n_qubits, bool trivial_locals,
                                    const std::vector<double>& v);
};

// Uniform draw of every stored angle from [0, 2*pi).
CartanParams random_cartan(int n_qubits, bool trivial_locals, std::mt19937_64& rng);

// Dense matrix of the parameterized form; unitary by construction.
Mat build_unitary(const CartanParams& params);

// Codewords {U b0, U b1}. Throws if U deviates from unitary by more than 1e-8
// or the basis vectors are not orthonormal.
Codespace encode(const Mat& u, const Vec& b0, const Vec& b1);

// encode with the basis {|0...0>, |10...0>}.
Codespace encode_standard(const Mat& u);

}  // namespace aqec
