#pragma once

#include <functional>
#include <vector>

#include "symp/path.hpp"
#include "symp/types.hpp"

namespace symp {

// Grid kernels come in a serial reference and an OpenMP version; both give identical
// results (each grid point is independent).
enum class Exec { Serial, Parallel };

enum class RhoKind { Spectral, Polar, Hat };
const char* rho_kind_name(RhoKind k);

std::vector<double> uniform_grid(double a, double b, int points);

// rho of one matrix. Spectral: on a clustering failure the point is retried at
// nearby parameters by the caller, see rho_scan.
cplx rho_of(const Mat& a, RhoKind kind, const Tolerances& tol);

// rho(path(t)) on the grid. A point where the spectral computation fails is nudged
// by +-1e-9, +-1e-7, +-1e-5 before giving up.
std::vector<cplx> rho_scan(const Path& p, const std::vector<double>& ts, RhoKind kind,
                           const Tolerances& tol, Exec ex = Exec::Parallel);

// f at every grid point; f must be safe to call concurrently.
std::vector<double> map_grid(const std::vector<double>& ts, const std::function<double(double)>& f,
                             Exec ex = Exec::Parallel);

// sigma_min(path(t) - Id) on the grid.
std::vector<double> smin_scan(const Path& p, const std::vector<double>& ts,
                              Exec ex = Exec::Parallel);

}  // namespace symp
