#include "aqec/codes.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace aqec {

namespace {

// Equal-weight superposition of computational basis states with unit signs.
Vec superpose(int dim, const std::vector<int>& kets) {
    Vec v = Vec::Zero(dim);
    for (int k : kets) v(k) += 1.0;
    v.normalize();
    return v;
}

Vec parse_codeword(const nlohmann::json& j) {
    Vec v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<int>(i)) = cxd(j[i][0].get<double>(), j[i][1].get<double>());
    return v;
}

}  // namespace

Mat projector(const Codespace& code) {
    Mat p = Mat::Zero(code.phys_dim, code.phys_dim);
    for (const Vec& w : code.codewords) p.noalias() += w * w.adjoint();
    return p;
}

int logical_dim(const Codespace& code) { return static_cast<int>(code.codewords.size()); }

void validate_codespace(const Codespace& code, double tol) {
    const int d = logical_dim(code);
    if (d == 0) throw std::invalid_argument("codespace: no codewords");
    for (int i = 0; i < d; ++i) {
        if (code.codewords[i].size() != code.phys_dim)
            throw std::invalid_argument("codespace: codeword dimension mismatch");
        for (int j = 0; j <= i; ++j) {
            const cxd ov = code.codewords[j].dot(code.codewords[i]);
            const double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(ov - target) > tol)
                throw std::invalid_argument("codespace: codewords not orthonormal");
        }
    }
}

Codespace leung_code() {
    Codespace c;
    c.phys_dim = 16;
    c.codewords = {superpose(16, {0b0000, 0b1111}), superpose(16, {0b1100, 0b0011})};
    return c;
}

Codespace ad_3qubit_code() {
    Codespace c;
    c.phys_dim = 8;
    c.codewords = {superpose(8, {0b000, 0b111}), superpose(8, {0b100, 0b011})};
    return c;
}

Codespace bitflip_code() {
    Codespace c;
    c.phys_dim = 8;
    c.codewords = {superpose(8, {0b000}), superpose(8, {0b111})};
    return c;
}

std::vector<Mat> leung_stabilizers() {
    return {pauli_string("XXXX"), pauli_string("ZZII"), pauli_string("IIZZ")};
}

std::vector<Mat> bitflip_stabilizers() {
    return {pauli_string("ZZI"), pauli_string("IZZ")};
}

std::vector<Mat> five_qubit_stabilizers() {
    return {pauli_string("XZZXI"), pauli_string("IXZZX"), pauli_string("XIXZZ"),
            pauli_string("ZXIXZ")};
}

Mat five_qubit_logical_x() { return pauli_string("XXXXX"); }
Mat five_qubit_logical_z() { return pauli_string("ZZZZZ"); }

Codespace five_qubit_code() {
    const int dim = 32;
    Mat proj = Mat::Identity(dim, dim);
    for (const Mat& g : five_qubit_stabilizers())
        proj = proj * 0.5 * (Mat::Identity(dim, dim) + g);
    Vec zero_l = proj * basis_state(dim, 0);
    zero_l.normalize();
    Vec one_l = five_qubit_logical_x() * zero_l;
    Codespace c;
    c.phys_dim = dim;
    c.codewords = {zero_l, one_l};
    validate_codespace(c, 1e-12);
    return c;
}

std::vector<std::string> table_code_names() {
    return {"3q_unstructured", "4q_unstructured", "3q_structured", "4q_structured",
            "4q_spinchain"};
}

std::string data_dir() {
    if (const char* env = std::getenv("AQEC_DATA_DIR")) return env;
#ifdef AQEC_DATA_DIR_DEFAULT
    return AQEC_DATA_DIR_DEFAULT;
#else
    return "data";
#endif
}

Codespace load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    nlohmann::json j;
    in >> j;
    Codespace c;
    c.phys_dim = j.at("phys_dim").get<int>();
    for (const auto& w : j.at("codewords")) c.codewords.push_back(parse_codeword(w));

    // Table entries are printed to 3-4 decimals: renormalize, require near-orthogonality,
    // then project out the residual overlap so downstream checks see an exact basis.
    for (Vec& w : c.codewords) {
        if (w.size() != c.phys_dim) throw std::runtime_error("code file: dimension mismatch");
        const double n = w.norm();
        if (std::abs(n - 1.0) > 5e-3) throw std::runtime_error("code file: codeword norm off");
        w /= n;
    }
    for (std::size_t i = 1; i < c.codewords.size(); ++i) {
        for (std::size_t j2 = 0; j2 < i; ++j2) {
            const cxd ov = c.codewords[j2].dot(c.codewords[i]);
            if (std::abs(ov) > 5e-3) throw std::runtime_error("code file: codewords not orthogonal");
            c.codewords[i] -= ov * c.codewords[j2];
        }
        c.codewords[i].normalize();
    }
    validate_codespace(c, 1e-10);
    return c;
}

Codespace load_table_code(const std::string& name) {
    for (const std::string& known : table_code_names())
        if (known == name) return load_code_file(data_dir() + "/codes/" + name + ".json");
    throw std::invalid_argument("unknown table code: " + name);
}

}  // namespace aqec
