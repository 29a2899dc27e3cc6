#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symp/kernels.hpp"
#include "symp/path.hpp"
#include "symp/spectral.hpp"
#include "symp/types.hpp"

namespace symp {

enum class Endpoint { WPlus, WMinus };
const char* endpoint_name(Endpoint e);

struct WindingResult {
  double turns = 0;            // total unwrapped phase / 2 pi
  std::vector<double> ts;      // final sample points
  std::vector<double> phase;   // unwrapped phase (radians) at ts
  int depth = 0;               // refinement passes used
};

// Values of a unit-complex function at a batch of parameters.
using UnitBatch = std::function<std::vector<cplx>(const std::vector<double>&)>;

// Unwrapped winding over [0,1]: uniform start grid, then midpoints are inserted until
// every phase step is below pi/2. More than max_refine passes -> NonResolvableWinding.
WindingResult winding_batch(const UnitBatch& f, int initial_points = 129, int max_refine = 40);
double winding(const std::function<cplx(double)>& f, int max_refine = 40, int initial_points = 129);

struct ExtensionRecord {
  Regime regime;
  double angle = 0;     // arg of the cluster center
  int krein = 0;        // m+ - m- for unit clusters
  double increment = 0; // turns of rho^2
};

struct ExtensionResult {
  double winding = 0;   // turns of rho^2 from A to W+-
  Endpoint endpoint = Endpoint::WPlus;
  double bridge = 0;    // part of winding spent on A -> A'
  bool perturbed = false;
  std::vector<ExtensionRecord> plan;
  std::string note;
};

// Winding of rho^2 along an extension of A in Sp* to W+ or W-.
ExtensionResult extension_winding(const Mat& a, const Tolerances& tol = {}, std::uint64_t seed = 0);

// A path from A to W+- made of polar and unitary pieces. It may leave Sp*.
Path extension_path(const Mat& a, Endpoint e, const Tolerances& tol = {});

struct TracePoint {
  double t;
  double phase_rho2;
  double smin;
};

struct IndexResult {
  HalfInt value;
  std::vector<TracePoint> trace;
  double extension_winding = 0;
  Endpoint endpoint = Endpoint::WPlus;
  int refine_depth = 0;
  double det_gap = 0;             // |det(psi(1) - Id)|
  double raw_total = 0;           // winding + extension before rounding
  double polar_total = 0;         // same with rho_polar
  double hat_total = 0;           // same with rho_hat
  bool perturbed = false;
};

IndexResult conley_zehnder(const Path& p, const Tolerances& tol = {}, std::uint64_t seed = 0,
                           Exec ex = Exec::Parallel);

// (1/2 + floor(sqrt(det S) T / 2 pi)) Sign S for 2x2 S; 0 when Sign S = 0.
HalfInt cz_dim2_closed_form(const Mat& s, double duration);

// Degree of rho along a loop.
int maslov_loop(const Path& p, const Tolerances& tol = {}, Exec ex = Exec::Parallel);

// CSV with header t,phase_rho2,smin_psi_minus_id
std::string trace_csv(const std::vector<TracePoint>& trace);

}  // namespace symp
