#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace symp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

struct Tolerances {
  double tol_symp = 1e-9;
  double tol_eig = 1e-7;
  double tol_kernel = 1e-8;
  double tol_form = 1e-8;
  int max_refine = 40;
  double tol_nf = 1e-6;

  void validate() const;
};

enum class ErrorKind {
  Dimension,
  Contract,
  Parse,
  IllConditioned,
  NotEigenvalue,
  KreinDegenerate,
  Parameter,
  PerturbationFailure,
  SamplingTooCoarse,
  Admissibility,
  NonResolvableWinding,
  InternalConsistency,
  IrregularCrossing,
  UnsupportedStructure,
  NoCrossing,
  NonLoop,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Exact half-integer, stored doubled.
struct HalfInt {
  std::int64_t doubled = 0;

  static HalfInt from_doubled(std::int64_t d) { return HalfInt{d}; }
  static HalfInt from_int(std::int64_t v) { return HalfInt{2 * v}; }
  bool is_integer() const { return doubled % 2 == 0; }
  double value() const { return 0.5 * static_cast<double>(doubled); }
  std::string str() const { return std::to_string(doubled) + "/2"; }

  HalfInt operator+(HalfInt o) const { return HalfInt{doubled + o.doubled}; }
  HalfInt operator-(HalfInt o) const { return HalfInt{doubled - o.doubled}; }
  HalfInt operator-() const { return HalfInt{-doubled}; }
  HalfInt& operator+=(HalfInt o) {
    doubled += o.doubled;
    return *this;
  }
  bool operator==(const HalfInt&) const = default;
};

}  // namespace symp
