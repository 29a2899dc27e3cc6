#include "symp/kernels.hpp"

#include <exception>

#include "symp/core_linalg.hpp"
#include "symp/spectral.hpp"

namespace symp {

const char* rho_kind_name(RhoKind k) {
  switch (k) {
    case RhoKind::Spectral: return "spectral";
    case RhoKind::Polar: return "polar";
    case RhoKind::Hat: return "hat";
  }
  return "?";
}

std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 2) throw Error(ErrorKind::Parameter, "uniform_grid: need >= 2 points");
  std::vector<double> ts(points);
  for (int i = 0; i < points; ++i) ts[i] = a + (b - a) * i / (points - 1);
  ts.back() = b;
  return ts;
}

cplx rho_of(const Mat& a, RhoKind kind, const Tolerances& tol) {
  switch (kind) {
    case RhoKind::Spectral: return rho(a, tol);
    case RhoKind::Polar: return rho_polar(a, tol);
    case RhoKind::Hat: return rho_hat(a, tol);
  }
  return 0;
}

namespace {

cplx rho_nudged(const Path& p, double t, RhoKind kind, const Tolerances& tol) {
  try {
    return rho_of(evaluate(p, t), kind, tol);
  } catch (const Error& e) {
    if (kind != RhoKind::Spectral) throw;
    for (double d : {1e-9, -1e-9, 1e-7, -1e-7, 1e-5, -1e-5}) {
      const double u = t + d;
      if (u < 0.0 || u > 1.0) continue;
      try {
        return rho_of(evaluate(p, u), kind, tol);
      } catch (const Error&) {
      }
    }
    throw;
  }
}

// Runs body(i) for every i; the first exception (by index) is rethrown after the loop.
template <class F>
void for_grid(int m, Exec ex, F&& body) {
  std::vector<std::exception_ptr> errs(m);
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
      try {
        body(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      try {
        body(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<cplx> rho_scan(const Path& p, const std::vector<double>& ts, RhoKind kind,
                           const Tolerances& tol, Exec ex) {
  std::vector<cplx> out(ts.size());
  for_grid(static_cast<int>(ts.size()), ex,
           [&](int i) { out[i] = rho_nudged(p, ts[i], kind, tol); });
  return out;
}

std::vector<double> map_grid(const std::vector<double>& ts, const std::function<double(double)>& f,
                             Exec ex) {
  std::vector<double> out(ts.size());
  for_grid(static_cast<int>(ts.size()), ex, [&](int i) { out[i] = f(ts[i]); });
  return out;
}

std::vector<double> smin_scan(const Path& p, const std::vector<double>& ts, Exec ex) {
  std::vector<double> out(ts.size());
  const int d = 2 * p->n;
  for_grid(static_cast<int>(ts.size()), ex, [&](int i) {
    out[i] = min_singular_value(evaluate(p, ts[i]) - Mat::Identity(d, d));
  });
  return out;
}

}  // namespace symp
