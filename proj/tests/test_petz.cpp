#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aqec/codes.hpp"
#include "aqec/petz.hpp"

using namespace aqec;

namespace {

// Single bit-flips with weight q on each qubit of three.
QuantumChannel weighted_flip_channel(double q) {
    QuantumChannel c;
    c.dim_in = c.dim_out = 8;
    c.kraus = {std::sqrt(1.0 - 3.0 * q) * pauli_string("III"), std::sqrt(q) * pauli_string("XII"),
               std::sqrt(q) * pauli_string("IXI"), std::sqrt(q) * pauli_string("IIX")};
    return c;
}

// Textbook three-qubit recovery: project onto the four syndrome subspaces,
// then undo the diagnosed flip.
QuantumChannel bitflip_perfect_recovery() {
    const auto subspace_proj = [](std::initializer_list<int> kets) {
        Mat p = Mat::Zero(8, 8);
        for (int k : kets) p(k, k) = 1.0;
        return p;
    };
    QuantumChannel rec;
    rec.dim_in = rec.dim_out = 8;
    rec.kraus = {
        subspace_proj({0b000, 0b111}),
        pauli_string("XII") * subspace_proj({0b100, 0b011}),
        pauli_string("IXI") * subspace_proj({0b010, 0b101}),
        pauli_string("IIX") * subspace_proj({0b001, 0b110}),
    };
    return rec;
}

QuantumChannel codespace_scrambler(const Codespace& code) {
    // Maps every codespace state to the maximally mixed codespace state.
    QuantumChannel c;
    c.dim_in = c.dim_out = code.phys_dim;
    for (const Vec& a : code.codewords)
        for (const Vec& b : code.codewords)
            c.kraus.push_back((a * b.adjoint()) / std::sqrt(2.0));
    return c;
}

}  // namespace

TEST_CASE("identity channel recovers perfectly through the adapted map") {
    const Codespace code = ad_3qubit_code();
    const QuantumChannel id = identity_channel(8);
    const QuantumChannel rec = petz_recovery(id, code);
    CHECK(fidelity_loss(id, rec, code) < 1e-12);

    // composite acts as P (.) P
    const Mat p = projector(code);
    const QuantumChannel comp = compose(rec, id);
    Mat rho = Mat::Zero(8, 8);
    rho(1, 1) = 0.5;
    rho(5, 5) = 0.5;
    CHECK(max_abs_diff(apply_raw(comp, rho), p * rho * p) < 1e-12);
}

TEST_CASE("adapted recovery reproduces the textbook recovery for a perfect code") {
    const Codespace code = bitflip_code();
    const QuantumChannel noise = weighted_flip_channel(0.05);
    const QuantumChannel petz = petz_recovery(noise, code);
    const QuantumChannel textbook = bitflip_perfect_recovery();

    const PauliFrame f = pauli_frame(code);
    for (const Mat& sig : {f.sigma0, f.x, f.y, f.z}) {
        const Mat via_petz = apply_raw(compose(petz, noise), sig);
        const Mat via_text = apply_raw(compose(textbook, noise), sig);
        CHECK(max_abs_diff(via_petz, via_text) < 1e-9);
    }
    const double lp = fidelity_loss(noise, petz, code);
    const double lt = fidelity_loss(noise, textbook, code);
    CHECK(std::abs(lp - lt) < 1e-9);
    CHECK(lp < 1e-10);
}

TEST_CASE("recovery is trace-preserving on the channel-image support") {
    const Codespace code = leung_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const QuantumChannel rec = petz_recovery(noise, code);

    Mat supp;
    herm_inv_sqrt(apply_raw(noise, projector(code)), 1e-10, &supp);
    Mat sum = Mat::Zero(16, 16);
    for (const Mat& r : rec.kraus) sum.noalias() += r.adjoint() * r;
    CHECK(max_abs_diff(sum, supp) < 1e-9);
}

TEST_CASE("composite map is unital on the codespace") {
    const Codespace code = leung_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const QuantumChannel rec = petz_recovery(noise, code);
    const Mat p = projector(code);
    CHECK(max_abs_diff(apply_raw(compose(rec, noise), p), p) < 1e-9);
}

TEST_CASE("T matrix limits") {
    const Codespace code = ad_3qubit_code();
    CHECK((t_matrix(identity_channel(8), petz_recovery(identity_channel(8), code), code) -
           Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    const QuantumChannel scramble = codespace_scrambler(code);
    const Eigen::Matrix3d t = t_matrix(scramble, identity_channel(8), code);
    CHECK(t.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("four-qubit code under damping approaches the quadratic loss law") {
    const double p = 0.05;
    const Codespace code = leung_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(p), 4);
    const double loss = fidelity_loss(noise, petz_recovery(noise, code), code);
    CHECK(std::abs(loss - 7.0 * p * p / 4.0) <= 2.0 * p * p * p);
    // frozen from the independent reference computation
    CHECK(loss == doctest::Approx(0.004279582487).epsilon(1e-6));
}

TEST_CASE("five-qubit code: standard recovery matches the quadratic law, adapted recovery beats it") {
    const double p = 0.05;
    const Codespace code = five_qubit_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(p), 5);

    const double std_loss = fidelity_loss(noise, five_qubit_standard_recovery(), code);
    CHECK(std::abs(std_loss - 15.0 * p * p / 8.0) <= 3.0 * p * p * p);

    const double petz_loss = fidelity_loss(noise, petz_recovery(noise, code), code);
    CHECK(petz_loss < std_loss);
    // the adapted map undershoots the law by an O(p^{5/2}) margin
    CHECK(std::abs(petz_loss - 15.0 * p * p / 8.0) <= 2.0 * std::pow(p, 2.5));
    CHECK(petz_loss == doctest::Approx(0.003825849316).epsilon(1e-6));
}

TEST_CASE("grid search agrees with the eigenvalue formula") {
    const Codespace code = leung_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const QuantumChannel rec = petz_recovery(noise, code);

    CHECK(worst_case_fidelity_bruteforce(identity_channel(16), petz_recovery(identity_channel(16), code),
                                         code, 31, 61) == doctest::Approx(1.0).epsilon(1e-12));

    const double via_grid = worst_case_fidelity_bruteforce(noise, rec, code, 61, 121);
    const double via_eig = 1.0 - fidelity_loss(noise, rec, code);
    CHECK(std::abs(via_grid - via_eig) < 1e-3);
    CHECK(via_grid >= via_eig - 1e-12);  // grid minimum cannot undercut the true minimum
}

TEST_CASE("perfect-correction certificate") {
    const Codespace bf = bitflip_code();
    const std::vector<Mat> flips = {pauli_string("III"), pauli_string("XII"), pauli_string("IXI"),
                                    pauli_string("IIX")};
    const PerfectQecReport rep = check_perfect_qec(bf, flips);
    CHECK(rep.satisfied);
    CHECK(rep.residual < 1e-12);
    CHECK(max_abs_diff(rep.alpha, rep.alpha.adjoint()) < 1e-10);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(rep.alpha(i, j)) < 1e-12);

    // five-qubit code corrects all weight-one Paulis
    std::vector<Mat> w1 = {pauli_string("IIIII")};
    for (int q = 0; q < 5; ++q)
        for (char c : {'X', 'Y', 'Z'}) {
            std::string s = "IIIII";
            s[q] = c;
            w1.push_back(pauli_string(s));
        }
    CHECK(check_perfect_qec(five_qubit_code(), w1).satisfied);

    // four-qubit code under damping is only approximately correctable
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const PerfectQecReport rep4 = check_perfect_qec(leung_code(), noise.kraus);
    CHECK(!rep4.satisfied);
    CHECK(rep4.residual == doctest::Approx(0.05).epsilon(1e-9));  // frozen: p/2 at p = 0.1
}

TEST_CASE("certificate verdict is invariant under unitary remixing of the error set") {
    const Codespace bf = bitflip_code();
    std::vector<Mat> flips = {0.8 * pauli_string("III"), 0.4 * pauli_string("XII"),
                              0.3 * pauli_string("IXI"), 0.33166247903554 * pauli_string("IIX")};
    std::mt19937_64 rng(11);
    const Mat u = haar_unitary(4, rng);
    std::vector<Mat> mixed(4, Mat::Zero(8, 8));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) mixed[i] += u(i, j) * flips[j];
    CHECK(check_perfect_qec(bf, flips).satisfied == check_perfect_qec(bf, mixed).satisfied);

    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    std::mt19937_64 rng2(12);
    const Mat u16 = haar_unitary(16, rng2);
    std::vector<Mat> mixed16(16, Mat::Zero(16, 16));
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) mixed16[i] += u16(i, j) * noise.kraus[j];
    CHECK(check_perfect_qec(leung_code(), noise.kraus).satisfied ==
          check_perfect_qec(leung_code(), mixed16).satisfied);
}

TEST_CASE("approximate-correction witness") {
    // perfect case: all Delta vanish and beta = sqrt(alpha)
    const Codespace bf = bitflip_code();
    const QuantumChannel flips = weighted_flip_channel(0.05);
    const AqecWitness w = check_aqec(bf, flips);
    CHECK(w.delta_norm.maxCoeff() < 1e-9);
    const PerfectQecReport rep = check_perfect_qec(bf, flips.kraus);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(w.beta(i, i) - std::sqrt(rep.alpha(i, i))) < 1e-9);

    // approximate case: nonzero Delta of order p
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const AqecWitness w4 = check_aqec(leung_code(), noise);
    CHECK(w4.delta_norm.maxCoeff() > 1e-3);
    CHECK(w4.delta_norm.maxCoeff() < 1.0);
    CHECK(!format_witness(w4).empty());
}

TEST_CASE("logical Pauli frame squares to the projector") {
    for (const Codespace& code : {leung_code(), five_qubit_code(), load_table_code("4q_structured")}) {
        const PauliFrame f = pauli_frame(code);
        const Mat p = projector(code);
        CHECK(max_abs_diff(f.sigma0, p) < 1e-12);
        for (const Mat& s : {f.x, f.y, f.z}) CHECK(max_abs_diff(s * s, p) < 1e-10);
    }
}

TEST_CASE("factored recovery path matches the dense path") {
    const Codespace code = leung_code();
    const QuantumChannel noise = tensor_power(make_amplitude_damping(0.1), 4);
    const QuantumChannel rec = petz_recovery(noise, code);
    const FactoredPetz fac = factored_petz(noise, code);

    const Eigen::Matrix3d dense_t = t_matrix(noise, rec, code);
    const Eigen::Matrix3d fac_t = t_matrix_factored(fac, noise.kraus);
    CHECK((dense_t - fac_t).cwiseAbs().maxCoeff() < 1e-10);

    const double fac_f2 = worst_case_fidelity_sq_factored(fac, noise.kraus);
    const double dense_f2 = 1.0 - fidelity_loss(noise, rec, code);
    CHECK(std::abs(fac_f2 - dense_f2) < 1e-10);
}

TEST_CASE("sphere-constrained quadratic minimum") {
    // pure eigenvalue case
    CHECK(min_quadratic_on_sphere(Eigen::Vector3d(1, 2, 3).asDiagonal(), Eigen::Vector3d::Zero()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // linear term dominant
    CHECK(min_quadratic_on_sphere(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, -2)) ==
          doctest::Approx(-1.0).epsilon(1e-10));
    // hard case: linear term orthogonal to the bottom eigenspace
    Eigen::Matrix3d a = Eigen::Vector3d(0, 1, 1).asDiagonal();
    CHECK(min_quadratic_on_sphere(a, Eigen::Vector3d(0, 0.1, 0)) ==
          doctest::Approx(-0.0025).epsilon(1e-10));
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS(petz_recovery(make_amplitude_damping(0.1), leung_code()));
    CHECK_THROWS(check_aqec(leung_code(), make_amplitude_damping(0.1)));
}
