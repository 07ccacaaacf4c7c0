#include "aqec/kak.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Mat rz(double a) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(-I_UNIT * (a / 2.0));
    m(1, 1) = std::exp(I_UNIT * (a / 2.0));
    return m;
}

Mat ry(double a) {
    Mat m(2, 2);
    m(0, 0) = std::cos(a / 2.0);
    m(0, 1) = -std::sin(a / 2.0);
    m(1, 0) = std::sin(a / 2.0);
    m(1, 1) = std::cos(a / 2.0);
    return m;
}

// Ordered product of exponentials of a commuting generator set.
template <size_t N>
Mat factor_exp(const std::array<const char*, N>& words, const std::array<double, N>& coeff) {
    Mat m = pauli_string_exp(words[0], coeff[0]);
    for (size_t i = 1; i < N; ++i) m = m * pauli_string_exp(words[i], coeff[i]);
    return m;
}

constexpr std::array<const char*, 3> kWords2 = {"XX", "YY", "ZZ"};
constexpr std::array<const char*, 3> kWordsF3 = {"XXZ", "YYZ", "ZZZ"};
constexpr std::array<const char*, 4> kWordsJ3 = {"XXX", "YYX", "ZZX", "IIX"};
constexpr std::array<const char*, 7> kWordsF4 = {"XXIZ", "YYIZ", "ZZIZ", "IIXZ",
                                                 "XXXZ", "YYXZ", "ZZXZ"};
constexpr std::array<const char*, 8> kWordsJ4 = {"IIIX", "XXIX", "YYIX", "ZZIX",
                                                 "IIXX", "XXXX", "YYXX", "ZZXX"};

Mat kak2_matrix(const Kak2& p, bool trivial) {
    Mat m = factor_exp(kWords2, p.c);
    if (trivial) return m;
    return kron(su2_matrix(p.left1), su2_matrix(p.left2)) * m *
           kron(su2_matrix(p.right1), su2_matrix(p.right2));
}

Mat slot3_matrix(const KSlot3& s) {
    return kron(kak2_matrix(s.head, false), su2_matrix(s.tail));
}

Mat kak3_matrix(const Kak3& p, bool trivial) {
    const Mat f1 = factor_exp(kWordsF3, p.f1);
    const Mat j = factor_exp(kWordsJ3, p.a);
    const Mat f2 = factor_exp(kWordsF3, p.f2);
    if (trivial) return f1 * j * f2;
    return slot3_matrix(p.k[0]) * f1 * slot3_matrix(p.k[1]) * j * slot3_matrix(p.k[2]) * f2 *
           slot3_matrix(p.k[3]);
}

Mat slot4_matrix(const KSlot4& s) {
    return kron(kak3_matrix(s.head, false), su2_matrix(s.tail));
}

Mat kak4_matrix(const Kak4& p, bool trivial) {
    if (trivial)
        return factor_exp(kWordsF4, p.f1) * factor_exp(kWordsJ4, p.a) *
               factor_exp(kWordsF4, p.f2);
    return slot4_matrix(p.k[0]) * factor_exp(kWordsF4, p.f1) * slot4_matrix(p.k[1]) *
           factor_exp(kWordsJ4, p.a) * slot4_matrix(p.k[2]) * factor_exp(kWordsF4, p.f2) *
           slot4_matrix(p.k[3]);
}

// Single traversal order shared by to_vector / from_vector / param_count so the
// flat layout cannot drift between them.
template <class P, class F>
void walk_su2(P& p, F&& f) {
    f(p.alpha);
    f(p.beta);
    f(p.gamma);
}

template <class P, class F>
void walk_kak2(P& p, bool trivial, F&& f) {
    if (!trivial) {
        walk_su2(p.left1, f);
        walk_su2(p.left2, f);
    }
    for (auto& c : p.c) f(c);
    if (!trivial) {
        walk_su2(p.right1, f);
        walk_su2(p.right2, f);
    }
}

template <class P, class F>
void walk_slot3(P& s, F&& f) {
    walk_kak2(s.head, false, f);
    walk_su2(s.tail, f);
}

template <class P, class F>
void walk_kak3(P& p, bool trivial, F&& f) {
    if (!trivial) walk_slot3(p.k[0], f);
    for (auto& c : p.f1) f(c);
    if (!trivial) walk_slot3(p.k[1], f);
    for (auto& c : p.a) f(c);
    if (!trivial) walk_slot3(p.k[2], f);
    for (auto& c : p.f2) f(c);
    if (!trivial) walk_slot3(p.k[3], f);
}

template <class P, class F>
void walk_slot4(P& s, F&& f) {
    walk_kak3(s.head, false, f);
    walk_su2(s.tail, f);
}

template <class P, class F>
void walk_kak4(P& p, bool trivial, F&& f) {
    if (!trivial) walk_slot4(p.k[0], f);
    for (auto& c : p.f1) f(c);
    if (!trivial) walk_slot4(p.k[1], f);
    for (auto& c : p.a) f(c);
    if (!trivial) walk_slot4(p.k[2], f);
    for (auto& c : p.f2) f(c);
    if (!trivial) walk_slot4(p.k[3], f);
}

template <class P, class F>
void walk(P& params, F&& f) {
    if (auto* p2 = std::get_if<Kak2>(&params.form))
        walk_kak2(*p2, params.trivial_locals, f);
    else if (auto* p3 = std::get_if<Kak3>(&params.form))
        walk_kak3(*p3, params.trivial_locals, f);
    else
        walk_kak4(std::get<Kak4>(params.form), params.trivial_locals, f);
}

}  // namespace

Mat pauli_string_exp(const std::string& word, double theta) {
    const Mat p = pauli_string(word);
    const int dim = static_cast<int>(p.rows());
    return std::cos(theta) * Mat::Identity(dim, dim) - I_UNIT * std::sin(theta) * p;
}

Mat su2_matrix(const Su2Params& p) { return rz(p.alpha) * ry(p.beta) * rz(p.gamma); }

CartanParams CartanParams::zero(int n_qubits, bool trivial_locals) {
    CartanParams p;
    p.trivial_locals = trivial_locals;
    switch (n_qubits) {
        case 2: p.form = Kak2{}; break;
        case 3: p.form = Kak3{}; break;
        case 4: p.form = Kak4{}; break;
        default: throw std::invalid_argument("CartanParams: n_qubits must be 2, 3 or 4");
    }
    return p;
}

int CartanParams::param_count(int n_qubits, bool trivial_locals) {
    CartanParams p = zero(n_qubits, trivial_locals);
    int count = 0;
    walk(p, [&count](double&) { ++count; });
    return count;
}

std::vector<double> CartanParams::to_vector() const {
    std::vector<double> out;
    walk(*this, [&out](const double& d) { out.push_back(d); });
    return out;
}

CartanParams CartanParams::from_vector(int n_qubits, bool trivial_locals,
                                       const std::vector<double>& v) {
    CartanParams p = zero(n_qubits, trivial_locals);
    const int want = param_count(n_qubits, trivial_locals);
    if (static_cast<int>(v.size()) != want)
        throw std::invalid_argument("CartanParams::from_vector: expected " +
                                    std::to_string(want) + " values, got " +
                                    std::to_string(v.size()));
    size_t i = 0;
    walk(p, [&](double& d) { d = v[i++]; });
    return p;
}

CartanParams random_cartan(int n_qubits, bool trivial_locals, std::mt19937_64& rng) {
    CartanParams p = CartanParams::zero(n_qubits, trivial_locals);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    walk(p, [&](double& d) { d = angle(rng); });
    return p;
}

Mat build_unitary(const CartanParams& params) {
    if (auto* p2 = std::get_if<Kak2>(&params.form)) return kak2_matrix(*p2, params.trivial_locals);
    if (auto* p3 = std::get_if<Kak3>(&params.form)) return kak3_matrix(*p3, params.trivial_locals);
    return kak4_matrix(std::get<Kak4>(params.form), params.trivial_locals);
}

Codespace encode(const Mat& u, const Vec& b0, const Vec& b1) {
    if (u.rows() != u.cols() || !is_unitary(u, 1e-8))
        throw std::invalid_argument("encode: matrix is not unitary");
    if (b0.size() != u.rows() || b1.size() != u.rows())
        throw std::invalid_argument("encode: basis dimension mismatch");
    if (std::abs(b0.norm() - 1.0) > 1e-8 || std::abs(b1.norm() - 1.0) > 1e-8 ||
        std::abs(b0.dot(b1)) > 1e-8)
        throw std::invalid_argument("encode: basis is not orthonormal");
    Codespace code;
    code.phys_dim = static_cast<int>(u.rows());
    code.codewords = {u * b0, u * b1};
    return code;
}

Codespace encode_standard(const Mat& u) {
    const int dim = static_cast<int>(u.rows());
    return encode(u, basis_state(dim, 0), basis_state(dim, dim / 2));
}

}  // namespace aqec
