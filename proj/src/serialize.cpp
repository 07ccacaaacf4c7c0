#include "aqec/serialize.hpp"

#include <stdexcept>

namespace aqec {

namespace {

nlohmann::json matrix_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const nlohmann::json& j, int rows, int cols) {
    if (static_cast<int>(j.size()) != rows) throw std::invalid_argument("matrix json: bad row count");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols)
            throw std::invalid_argument("matrix json: bad column count");
        for (int c = 0; c < cols; ++c)
            m(r, c) = cxd(j[r][c][0].get<double>(), j[r][c][1].get<double>());
    }
    return m;
}

}  // namespace

void to_json(nlohmann::json& j, const QuantumChannel& c) {
    j = nlohmann::json{{"dim_in", c.dim_in}, {"dim_out", c.dim_out}};
    nlohmann::json kraus = nlohmann::json::array();
    for (const Mat& k : c.kraus) kraus.push_back(matrix_to_json(k));
    j["kraus"] = std::move(kraus);
}

void from_json(const nlohmann::json& j, QuantumChannel& c) {
    c.dim_in = j.at("dim_in").get<int>();
    c.dim_out = j.at("dim_out").get<int>();
    c.kraus.clear();
    for (const auto& k : j.at("kraus")) c.kraus.push_back(matrix_from_json(k, c.dim_out, c.dim_in));
    if (!is_cptp(c)) throw std::invalid_argument("channel json: Kraus sum not trace-preserving");
}

void to_json(nlohmann::json& j, const Codespace& c) {
    j = nlohmann::json{{"phys_dim", c.phys_dim}};
    nlohmann::json words = nlohmann::json::array();
    for (const Vec& w : c.codewords) {
        nlohmann::json entries = nlohmann::json::array();
        for (int i = 0; i < w.size(); ++i) entries.push_back({w(i).real(), w(i).imag()});
        words.push_back(std::move(entries));
    }
    j["codewords"] = std::move(words);
}

void from_json(const nlohmann::json& j, Codespace& c) {
    c.phys_dim = j.at("phys_dim").get<int>();
    c.codewords.clear();
    for (const auto& w : j.at("codewords")) {
        Vec v(static_cast<int>(w.size()));
        for (int i = 0; i < v.size(); ++i) v(i) = cxd(w[i][0].get<double>(), w[i][1].get<double>());
        c.codewords.push_back(std::move(v));
    }
}

}  // namespace aqec
