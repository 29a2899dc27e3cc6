#pragma once

// Crossing search shared by the symplectic and Lagrangian indices.

#include <functional>
#include <vector>

#include "symp/index_rs.hpp"

namespace symp::detail {

struct ScanProblem {
  std::function<double(double)> smin;  // relative smallest singular value
  std::function<int(double)> kernel_dim;
  std::function<CrossingReport(double)> classify;
};

constexpr int kScanPoints = 512;

// Doubled index contribution of one smooth piece over [0,1], endpoint crossings at weight 1/2.
// Every local minimum of the grid scan is refined by golden section. Found crossings are
// appended to out (local t). Plateaus of constant kernel dimension covering all of [0,1]
// score 0; any other plateau raises UnsupportedStructure.
std::int64_t scan_crossings(const ScanProblem& sp, const Tolerances& tol, Exec ex,
                            std::vector<CrossingReport>& out);

// Eigen-decomposes gamma and fills signature / regular. scale feeds the regularity test.
void finish_report(CrossingReport& r, double scale, const Tolerances& tol);

std::vector<SminSample> smin_trace(const ScanProblem& sp, Exec ex, const Tolerances& tol);

}  // namespace symp::detail
