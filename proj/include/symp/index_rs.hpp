#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symp/kernels.hpp"
#include "symp/path.hpp"
#include "symp/types.hpp"

namespace symp {

struct CrossingReport {
  double t = 0;
  int kernel_dim = 0;
  Mat kernel_basis;  // orthonormal columns
  Mat gamma;         // crossing form in that basis
  int signature = 0;
  bool regular = true;
  bool endpoint = false;  // weight 1/2
};

struct SminSample {
  double t;
  double smin;
  int kernel_dim;
};

struct RsResult {
  HalfInt value;
  std::vector<CrossingReport> crossings;
  std::vector<SminSample> trace;
  std::vector<std::string> notes;  // closed forms and fallbacks used, per segment
};

// Crossing-form index of a symplectic path against the diagonal.
RsResult rs_index(const Path& p, const Tolerances& tol = {}, Exec ex = Exec::Parallel);

// --- Lagrangian side. A frame is a 2m x m matrix of full rank; omega is the ambient form
// matrix, which must be orthogonal (Omega0 and omega_bar are).

using FramePath = std::function<Mat(double)>;

Mat omega_bar(int n);               // (-Omega0) + Omega0 on R^2n x R^2n
Mat graph_lagrangian(const Mat& a);  // [Id; A]
bool is_lagrangian(const Mat& frame, const Mat& omega, double tol = 1e-8);

struct CrossingForm {
  Mat basis;  // coordinates of Lambda(t0) ∩ V in the orthonormalized frame of Lambda(t0)
  Mat form;   // crossing form on that basis
  Mat full;   // the form Q on all of Lambda(t0)
};

// W defaults to J Lambda(t0) with J = omega^-1; a custom supplement may be passed.
CrossingForm lagrangian_crossing_form(const FramePath& lam, double t0, const Mat& v,
                                      const Mat& omega, double h = 1e-4,
                                      const Mat* w = nullptr, const Tolerances& tol = {});

RsResult lagrangian_rs_index(const FramePath& lam, const Mat& v, const Mat& omega,
                             const Tolerances& tol = {}, Exec ex = Exec::Parallel);

// Lagrangian index of t -> psi_t V against V = {0} x R^n.
RsResult rs2_index(const Path& p, const Tolerances& tol = {}, Exec ex = Exec::Parallel);

std::string smin_csv(const std::vector<SminSample>& trace);

}  // namespace symp
