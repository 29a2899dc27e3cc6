#include "symp/index_cz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "symp/core_linalg.hpp"
#include "symp/normal_form.hpp"

namespace symp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGuard = 0.1;

double step_phase(cplx a, cplx b) { return std::arg(b / a); }

// exp node with velocity x (Hamiltonian), symmetrized.
Path exp_of(const Mat& x) {
  Mat s = -j0(half_dim(x)) * x;
  s = 0.5 * (s + s.transpose());
  return path_exp(s, 1.0);
}

UnitBatch rho_batch(const Path& p, RhoKind kind, const Tolerances& tol, Exec ex, bool squared) {
  return [=](const std::vector<double>& ts) {
    auto v = rho_scan(p, ts, kind, tol, ex);
    if (squared)
      for (auto& z : v) z *= z;
    return v;
  };
}

double nearest_int_checked(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) >= kGuard)
    throw Error(ErrorKind::NonResolvableWinding,
                std::string(what) + ": total winding " + std::to_string(x) +
                    " is not within 0.1 of an integer");
  return r;
}

}  // namespace

const char* endpoint_name(Endpoint e) { return e == Endpoint::WPlus ? "W+" : "W-"; }

WindingResult winding_batch(const UnitBatch& f, int initial_points, int max_refine) {
  if (initial_points < 2) throw Error(ErrorKind::Parameter, "winding: need >= 2 points");
  std::vector<double> ts = uniform_grid(0.0, 1.0, initial_points);
  std::vector<cplx> vs = f(ts);
  WindingResult res;
  for (int depth = 0;; ++depth) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i)
      if (std::abs(step_phase(vs[i], vs[i + 1])) >= kPi / 2) bad.push_back(i);
    if (bad.empty()) {
      res.depth = depth;
      break;
    }
    if (depth >= max_refine)
      throw Error(ErrorKind::NonResolvableWinding,
                  "winding: phase steps still >= pi/2 after " + std::to_string(max_refine) +
                      " refinement passes near t=" + std::to_string(ts[bad[0]]));
    std::vector<double> mids;
    for (std::size_t i : bad) mids.push_back(0.5 * (ts[i] + ts[i + 1]));
    const std::vector<cplx> mv = f(mids);
    std::vector<double> t2;
    std::vector<cplx> v2;
    std::size_t k = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      t2.push_back(ts[i]);
      v2.push_back(vs[i]);
      if (k < bad.size() && bad[k] == i) {
        t2.push_back(mids[k]);
        v2.push_back(mv[k]);
        ++k;
      }
    }
    ts = std::move(t2);
    vs = std::move(v2);
  }
  res.ts = ts;
  res.phase.assign(ts.size(), 0.0);
  res.phase[0] = std::arg(vs[0]);
  for (std::size_t i = 1; i < ts.size(); ++i)
    res.phase[i] = res.phase[i - 1] + step_phase(vs[i - 1], vs[i]);
  res.turns = (res.phase.back() - res.phase.front()) / (2 * kPi);
  return res;
}

double winding(const std::function<cplx(double)>& f, int max_refine, int initial_points) {
  UnitBatch b = [&](const std::vector<double>& ts) {
    std::vector<cplx> v;
    for (double t : ts) v.push_back(f(t));
    return v;
  };
  return winding_batch(b, initial_points, max_refine).turns;
}

ExtensionResult extension_winding(const Mat& a, const Tolerances& tol, std::uint64_t seed) {
  tol.validate();
  require_symplectic(a, tol, "extension_winding");
  const int n = half_dim(a);
  const Mat id = Mat::Identity(2 * n, 2 * n);
  const double d = (a - id).determinant();
  if (!(std::abs(d) > tol.tol_kernel))
    throw Error(ErrorKind::Admissibility,
                "extension_winding: det(A - Id) = " + std::to_string(d) + " too close to 0");
  ExtensionResult out;
  out.endpoint = d > 0 ? Endpoint::WPlus : Endpoint::WMinus;

  SpectralAnalysis sa = analyze_spectrum(a, tol, false, true);
  bool repeated = sa.ambiguous_merges > 0;
  for (const auto& c : sa.clusters) repeated = repeated || c.mult() > 1;
  if (repeated) {
    const double eps = std::min(1e-3, 0.01 * std::pow(std::abs(d), 1.0 / (2 * n)));
    try {
      const Mat ap = semisimple_perturb(a, eps, seed, tol);
      const Mat step = symplectic_inverse(a) * ap;
      Mat x = step.log();
      const Path bridge = path_prod(path_constant(a), exp_of(x));
      out.bridge = winding_batch(rho_batch(bridge, RhoKind::Spectral, tol, Exec::Serial, true), 17,
                                 tol.max_refine)
                       .turns;
      sa = analyze_spectrum(ap, tol, false, true);
      out.perturbed = true;
    } catch (const Error& e) {
      // the analytic rule still holds on A itself: Krein counts are stable
      out.note = std::string("perturbation skipped: ") + e.what();
    }
  }
  out.winding = out.bridge;
  for (const auto& c : sa.clusters) {
    ExtensionRecord r{c.regime, std::arg(c.center), 0, 0.0};
    if (c.regime == Regime::UnitNonReal && c.center.imag() > 0) {
      r.krein = c.krein_pos - c.krein_neg;
      r.increment = r.krein * (kPi - r.angle) / kPi;
      out.winding += r.increment;
    }
    out.plan.push_back(r);
  }
  return out;
}

Path extension_path(const Mat& a, Endpoint e, const Tolerances& tol) {
  const int n = half_dim(a);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat& v = svd.matrixV();
  const Mat o = svd.matrixU() * v.transpose();
  const Mat logp = v * svd.singularValues().array().log().matrix().asDiagonal() * v.transpose();

  Mat ow = -Mat::Identity(2 * n, 2 * n), logpw = Mat::Zero(2 * n, 2 * n);
  if (e == Endpoint::WMinus) {
    ow(0, 0) = ow(n, n) = 1.0;
    logpw(0, 0) = std::log(2.0);
    logpw(n, n) = -std::log(2.0);
  }
  // unitary step O -> O_W through the principal log of O^T O_W
  const Mat u = o.transpose() * ow;
  CMat uc(n, n);
  uc.real() = 0.5 * (u.topLeftCorner(n, n) + u.bottomRightCorner(n, n));
  uc.imag() = 0.5 * (u.bottomLeftCorner(n, n) - u.topRightCorner(n, n));
  Eigen::ComplexSchur<CMat> schur(uc);
  const CMat& q = schur.matrixU();
  CVec lg(n);
  for (int i = 0; i < n; ++i) lg(i) = std::log(schur.matrixT()(i, i));
  const CMat l = q * lg.asDiagonal() * q.adjoint();
  Mat lr(2 * n, 2 * n);
  lr << l.real(), -l.imag(), l.imag(), l.real();

  Tolerances loose = tol;
  loose.tol_symp = std::max(tol.tol_symp, 1e-7);
  // first piece O exp((1-t) log P): ends exactly at O, starts at OP = A up to rounding
  return path_cat({path_reverse(path_prod(path_constant(o), exp_of(logp))),
                   path_prod(path_constant(o), exp_of(lr)),
                   path_prod(path_constant(ow), exp_of(logpw))},
                  loose);
}

IndexResult conley_zehnder(const Path& p, const Tolerances& tol, std::uint64_t seed, Exec ex) {
  tol.validate();
  const int n = p->n;
  const Mat id = Mat::Identity(2 * n, 2 * n);
  const Mat a0 = evaluate(p, 0.0), a1 = evaluate(p, 1.0);
  if ((a0 - id).norm() > 10.0 * tol.tol_symp * (1.0 + a0.norm()))
    throw Error(ErrorKind::Admissibility, "conley_zehnder: path does not start at Id");
  IndexResult res;
  res.det_gap = std::abs((a1 - id).determinant());
  if (!(res.det_gap > tol.tol_kernel))
    throw Error(ErrorKind::Admissibility,
                "conley_zehnder: 1 is an eigenvalue of psi(1) (|det(psi(1)-Id)| = " +
                    std::to_string(res.det_gap) + ")");

  const ExtensionResult ext = extension_winding(a1, tol, seed);
  res.extension_winding = ext.winding;
  res.endpoint = ext.endpoint;
  res.perturbed = ext.perturbed;

  const WindingResult w =
      winding_batch(rho_batch(p, RhoKind::Spectral, tol, ex, true), 129, tol.max_refine);
  res.refine_depth = w.depth;
  const std::vector<double> smin = smin_scan(p, w.ts, ex);
  for (std::size_t i = 0; i < w.ts.size(); ++i) res.trace.push_back({w.ts[i], w.phase[i], smin[i]});
  res.raw_total = w.turns + ext.winding;
  const double main = nearest_int_checked(res.raw_total, "conley_zehnder");

  // The same degree with rho_polar and rho_hat. Their extension parts come from a
  // materialized path e' to W+-; the loop (extension, reverse e') has the same degree
  // for every rho, so the analytic rho correction carries over.
  const Path e2 = extension_path(a1, ext.endpoint, tol);
  const double w_rho_e2 =
      winding_batch(rho_batch(e2, RhoKind::Spectral, tol, ex, true), 129, tol.max_refine).turns;
  const double correction = ext.winding - w_rho_e2;
  for (RhoKind k : {RhoKind::Polar, RhoKind::Hat}) {
    const double wp = winding_batch(rho_batch(p, k, tol, ex, true), 129, tol.max_refine).turns;
    const double we = winding_batch(rho_batch(e2, k, tol, ex, true), 129, tol.max_refine).turns;
    const double total = wp + we + correction;
    (k == RhoKind::Polar ? res.polar_total : res.hat_total) = total;
    const double r = std::round(total);
    if (std::abs(total - r) >= kGuard || r != main)
      throw Error(ErrorKind::InternalConsistency,
                  std::string("conley_zehnder: rho_") + rho_kind_name(k) + " gives " +
                      std::to_string(total) + ", spectral rho gives " +
                      std::to_string(res.raw_total));
  }
  res.value = HalfInt::from_int(static_cast<std::int64_t>(main));
  return res;
}

HalfInt cz_dim2_closed_form(const Mat& s, double duration) {
  if (s.rows() != 2 || s.cols() != 2) throw Error(ErrorKind::Dimension, "closed form needs 2x2 S");
  if (!(duration > 0)) throw Error(ErrorKind::Parameter, "closed form needs T > 0");
  const Mat sym = 0.5 * (s + s.transpose());
  const double det = sym.determinant();
  if (std::abs(det) <= 1e-14 * std::max(1.0, sym.squaredNorm()))
    throw Error(ErrorKind::Parameter, "closed form needs nondegenerate S");
  const int sign = signature(sym, 0.0);
  if (sign == 0) return HalfInt::from_int(0);
  const double x = std::sqrt(det) * duration / (2 * kPi);
  if (std::abs(x - std::round(x)) < 1e-12)
    throw Error(ErrorKind::Admissibility, "closed form: sqrt(det S) T is a multiple of 2 pi");
  const auto m = static_cast<std::int64_t>(std::floor(x));
  return HalfInt::from_doubled(sign * (1 + 2 * m));
}

int maslov_loop(const Path& p, const Tolerances& tol, Exec ex) {
  const Mat a0 = evaluate(p, 0.0), a1 = evaluate(p, 1.0);
  if ((a0 - a1).norm() > 1e-8 * std::max(1.0, a0.norm()))
    throw Error(ErrorKind::NonLoop, "maslov_loop: path(0) != path(1)");
  const double w =
      winding_batch(rho_batch(p, RhoKind::Spectral, tol, ex, false), 129, tol.max_refine).turns;
  return static_cast<int>(nearest_int_checked(w, "maslov_loop"));
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "t,phase_rho2,smin_psi_minus_id\n";
  for (const auto& tp : trace) os << tp.t << ',' << tp.phase_rho2 << ',' << tp.smin << '\n';
  return os.str();
}

}  // namespace symp
