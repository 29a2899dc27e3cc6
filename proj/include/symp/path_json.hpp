#pragma once

#include "json.hpp"
#include "symp/path.hpp"

namespace symp {

// Matrix as a list of rows; Parse error on ragged or non-numeric input.
Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Mat& m);

// {"n": int, "path": node}; node dimensions must agree with n (Dimension error otherwise).
Path path_from_json(const nlohmann::json& doc, const Tolerances& tol = {});
// A single node; expect_n < 0 means infer. Loop nodes take "n" or inherit expect_n.
Path node_from_json(const nlohmann::json& node, int expect_n, const Tolerances& tol = {});

}  // namespace symp
