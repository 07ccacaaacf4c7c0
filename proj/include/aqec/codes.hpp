#pragma once

#include <string>
#include <vector>

#include "aqec/linalg.hpp"

namespace aqec {

// Ordered orthonormal codewords spanning a d-dimensional subspace of a
// phys_dim-dimensional physical space.
struct Codespace {
    int phys_dim = 0;
    std::vector<Vec> codewords;
};

// Σ_i |i_L><i_L|
Mat projector(const Codespace& code);

int logical_dim(const Codespace& code);

// Throws unless codewords are unit-norm and pairwise orthogonal within tol.
void validate_codespace(const Codespace& code, double tol = 1e-10);

// |0_L> = (|0000>+|1111>)/√2, |1_L> = (|1100>+|0011>)/√2.
Codespace leung_code();

// |0_L> = (|000>+|111>)/√2, |1_L> = (|100>+|011>)/√2.
Codespace ad_3qubit_code();

// {|000>, |111>}
Codespace bitflip_code();

// [[5,1,3]] code built from its stabilizer projector.
Codespace five_qubit_code();

// Stabilizer generators as dense matrices, for condition checks.
std::vector<Mat> leung_stabilizers();
std::vector<Mat> bitflip_stabilizers();
std::vector<Mat> five_qubit_stabilizers();
Mat five_qubit_logical_x();
Mat five_qubit_logical_z();

// Numerically-optimized codes shipped as JSON data files. Codewords are
// re-normalized on load; orthogonality must hold within 5e-3 before
// orthonormalization is applied to the second vector.
// Known names: 3q_unstructured, 4q_unstructured, 3q_structured, 4q_structured,
// 4q_spinchain.
Codespace load_table_code(const std::string& name);
std::vector<std::string> table_code_names();

// Load from an explicit JSON file ({phys_dim, codewords: [[[re,im],...]]}).
Codespace load_code_file(const std::string& path);

// Directory holding the code tables: $AQEC_DATA_DIR if set, else the
// compile-time default (source-tree data/ directory).
std::string data_dir();

}  // namespace aqec
