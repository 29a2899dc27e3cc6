#include <algorithm>
#include <cmath>

#include "crossing_scan.hpp"
#include "symp/core_linalg.hpp"
#include "symp/index_rs.hpp"

namespace symp {

namespace {

Mat orth(const Mat& f) {
  Eigen::HouseholderQR<Mat> qr(f);
  return qr.householderQ() * Mat::Identity(f.rows(), f.cols());
}

void require_orthogonal_form(const Mat& omega) {
  const Mat id = Mat::Identity(omega.rows(), omega.cols());
  if ((omega.transpose() * omega - id).norm() > 1e-12 * omega.rows() ||
      (omega + omega.transpose()).norm() > 1e-12 * omega.rows())
    throw Error(ErrorKind::Parameter, "lagrangian: ambient form must be orthogonal and antisymmetric");
}

void require_frame(const Mat& f, const Mat& omega, const char* where) {
  if (f.rows() != omega.rows() || 2 * f.cols() != f.rows())
    throw Error(ErrorKind::Dimension, std::string(where) + ": frame must be 2m x m");
}

// Singular values of [orth(F), Qv]; small ones count intersection directions.
Vec stacked_sv(const Mat& f, const Mat& qv) {
  Mat m(f.rows(), f.cols() + qv.cols());
  m << orth(f), qv;
  return Eigen::JacobiSVD<Mat>(m).singularValues();
}

// Derivative of g at t0: central differences with one Richardson level, one-sided at ends.
Mat derivative(const std::function<Mat(double)>& g, double t0, double h) {
  auto d = [&](double k) -> Mat {
    if (t0 - k >= 0.0 && t0 + k <= 1.0) return (g(t0 + k) - g(t0 - k)) / (2 * k);
    if (t0 + 2 * k <= 1.0) return (-3.0 * g(t0) + 4.0 * g(t0 + k) - g(t0 + 2 * k)) / (2 * k);
    return (3.0 * g(t0) - 4.0 * g(t0 - k) + g(t0 - 2 * k)) / (2 * k);
  };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

Mat omega_bar(int n) {
  const Mat o = omega0(n);
  Mat out = Mat::Zero(4 * n, 4 * n);
  out.topLeftCorner(2 * n, 2 * n) = -o;
  out.bottomRightCorner(2 * n, 2 * n) = o;
  return out;
}

Mat graph_lagrangian(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d || d % 2) throw Error(ErrorKind::Dimension, "graph_lagrangian: need 2n x 2n");
  Mat f(2 * d, d);
  f << Mat::Identity(d, d), a;
  return f;
}

bool is_lagrangian(const Mat& frame, const Mat& omega, double tol) {
  if (frame.rows() != omega.rows() || 2 * frame.cols() != frame.rows()) return false;
  const Mat q = orth(frame);
  if (Eigen::JacobiSVD<Mat>(frame).singularValues().minCoeff() <
      tol * std::max(1.0, frame.norm()))
    return false;
  return (q.transpose() * omega * q).norm() < tol;
}

CrossingForm lagrangian_crossing_form(const FramePath& lam, double t0, const Mat& v,
                                      const Mat& omega, double h, const Mat* w,
                                      const Tolerances& tol) {
  require_orthogonal_form(omega);
  const Mat f0 = orth(lam(t0));
  require_frame(f0, omega, "lagrangian_crossing_form");
  require_frame(v, omega, "lagrangian_crossing_form");
  const int m = static_cast<int>(f0.cols());
  const Mat qv = orth(v);

  Mat st(2 * m, 2 * m);
  st << f0, -qv;
  Eigen::JacobiSVD<Mat> svd(st, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  int k = 0;
  for (int i = 0; i < sv.size(); ++i) k += sv(i) < tol.tol_kernel;
  if (k == 0)
    throw Error(ErrorKind::NoCrossing,
                "lagrangian_crossing_form: trivial intersection at t=" + std::to_string(t0));

  // coordinates in f0 of an orthonormal basis of the intersection
  const Mat a = svd.matrixV().rightCols(k).topRows(m);
  Eigen::JacobiSVD<Mat> sa(a, Eigen::ComputeThinU);
  CrossingForm out;
  out.basis = sa.matrixU();

  const Mat wm = w ? *w : Mat(omega.transpose() * f0);
  if (wm.rows() != 2 * m || wm.cols() != m)
    throw Error(ErrorKind::Dimension, "lagrangian_crossing_form: supplement must be 2m x m");
  Mat b(2 * m, 2 * m);
  b << f0, wm;
  const Vec bs = Eigen::JacobiSVD<Mat>(b).singularValues();
  if (bs(bs.size() - 1) < 1e-10 * bs(0))
    throw Error(ErrorKind::IllConditioned,
                "lagrangian_crossing_form: supplement not transverse to Lambda(t0)");
  const Eigen::PartialPivLU<Mat> lu(b);
  // Lambda(t) = graph of Y X^-1 : Lambda(t0) -> W
  auto alpha = [&](double t) -> Mat {
    const Mat c = lu.solve(lam(t));
    return c.bottomRows(m) * c.topRows(m).inverse();
  };
  const Mat q = f0.transpose() * omega * wm * derivative(alpha, t0, h);
  out.full = 0.5 * (q + q.transpose());
  out.form = out.basis.transpose() * out.full * out.basis;
  return out;
}

RsResult lagrangian_rs_index(const FramePath& lam, const Mat& v, const Mat& omega,
                             const Tolerances& tol, Exec ex) {
  tol.validate();
  require_orthogonal_form(omega);
  require_frame(v, omega, "lagrangian_rs_index");
  const Mat qv = orth(v);
  detail::ScanProblem sp;
  sp.smin = [=](double t) {
    const Vec s = stacked_sv(lam(t), qv);
    return s(s.size() - 1);
  };
  sp.kernel_dim = [=](double t) {
    const Vec s = stacked_sv(lam(t), qv);
    return static_cast<int>((s.array() < tol.tol_kernel).count());
  };
  sp.classify = [=](double t) {
    CrossingReport r;
    try {
      const CrossingForm cf = lagrangian_crossing_form(lam, t, v, omega, 1e-4, nullptr, tol);
      r.kernel_basis = cf.basis;
      r.gamma = cf.form;
      detail::finish_report(r, cf.full.norm(), tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoCrossing) throw;
    }
    return r;
  };
  RsResult out;
  out.value = HalfInt::from_doubled(detail::scan_crossings(sp, tol, ex, out.crossings));
  out.trace = detail::smin_trace(sp, ex, tol);
  return out;
}

RsResult rs2_index(const Path& p, const Tolerances& tol, Exec ex) {
  const int n = p->n;
  Mat v = Mat::Zero(2 * n, n);
  v.bottomRows(n) = Mat::Identity(n, n);
  return lagrangian_rs_index([p, v](double t) { return Mat(evaluate(p, t) * v); }, v, omega0(n),
                             tol, ex);
}

}  // namespace symp
