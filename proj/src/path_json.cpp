#include "symp/path_json.hpp"

#include <string>

namespace symp {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

void check_n(int got, int expect, const char* what) {
  if (expect >= 0 && got != expect)
    throw Error(ErrorKind::Dimension, std::string(what) + ": dimension " + std::to_string(got) +
                                          " does not match n = " + std::to_string(expect));
}

}  // namespace

Mat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) parse_fail("matrix must be a list of rows");
  const auto rows = j.size(), cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) parse_fail("matrix rows have unequal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = number(j[r][c], "matrix entry");
  }
  return m;
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Path node_from_json(const nlohmann::json& node, int expect_n, const Tolerances& tol) {
  const auto& ty = field(node, "type");
  if (!ty.is_string()) parse_fail("node type must be a string");
  const std::string type = ty.get<std::string>();
  Path p;
  if (type == "exp") {
    const double t = node.contains("T") ? number(node.at("T"), "T") : 1.0;
    p = path_exp(matrix_from_json(field(node, "S")), t);
  } else if (type == "sampled") {
    const auto& ts = field(node, "times");
    const auto& ms = field(node, "matrices");
    if (!ts.is_array() || !ms.is_array()) parse_fail("sampled: times and matrices must be lists");
    std::vector<double> times;
    std::vector<Mat> mats;
    for (const auto& t : ts) times.push_back(number(t, "time"));
    for (const auto& m : ms) mats.push_back(matrix_from_json(m));
    p = path_sampled(std::move(times), std::move(mats), tol);
  } else if (type == "cat" || type == "dsum") {
    const auto& parts = field(node, "parts");
    if (!parts.is_array() || parts.empty()) parse_fail(type + ": parts must be a non-empty list");
    std::vector<Path> ps;
    for (const auto& q : parts) ps.push_back(node_from_json(q, type == "cat" ? expect_n : -1, tol));
    p = type == "cat" ? path_cat(std::move(ps), tol) : path_dsum(std::move(ps));
  } else if (type == "prod") {
    p = path_prod(node_from_json(field(node, "left"), expect_n, tol),
                  node_from_json(field(node, "right"), expect_n, tol));
  } else if (type == "conj") {
    p = path_conj(node_from_json(field(node, "phi"), expect_n, tol),
                  node_from_json(field(node, "psi"), expect_n, tol));
  } else if (type == "reverse") {
    p = path_reverse(node_from_json(field(node, "inner"), expect_n, tol));
  } else if (type == "shear") {
    p = make_shear(matrix_from_json(field(node, "B0")), matrix_from_json(field(node, "B1")));
  } else if (type == "loop") {
    const auto& w = field(node, "wind");
    if (!w.is_number_integer()) parse_fail("loop: wind must be an integer");
    int n = expect_n;
    if (node.contains("n")) {
      if (!node.at("n").is_number_integer()) parse_fail("loop: n must be an integer");
      n = node.at("n").get<int>();
    }
    if (n < 1) parse_fail("loop: dimension unknown, give \"n\"");
    p = make_loop(w.get<int>(), n);
  } else {
    parse_fail("unknown node type \"" + type + "\"");
  }
  check_n(p->n, expect_n, type.c_str());
  return p;
}

Path path_from_json(const nlohmann::json& doc, const Tolerances& tol) {
  const auto& nj = field(doc, "n");
  if (!nj.is_number_integer() || nj.get<int>() < 1) parse_fail("n must be a positive integer");
  return node_from_json(field(doc, "path"), nj.get<int>(), tol);
}

}  // namespace symp
