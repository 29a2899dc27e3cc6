#include "symp/core_linalg.hpp"

#include <cmath>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace symp {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::NotEigenvalue: return "not-an-eigenvalue";
    case ErrorKind::KreinDegenerate: return "krein-degenerate";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::PerturbationFailure: return "perturbation-failure";
    case ErrorKind::SamplingTooCoarse: return "sampling-too-coarse";
    case ErrorKind::Admissibility: return "admissibility";
    case ErrorKind::NonResolvableWinding: return "non-resolvable-winding";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::IrregularCrossing: return "irregular-crossing";
    case ErrorKind::UnsupportedStructure: return "unsupported-structure";
    case ErrorKind::NoCrossing: return "no-crossing";
    case ErrorKind::NonLoop: return "non-loop";
  }
  return "unknown";
}

void Tolerances::validate() const {
  if (!(tol_symp > 0 && tol_eig > 0 && tol_kernel > 0 && tol_form > 0 && tol_nf > 0 &&
        max_refine > 0))
    throw Error(ErrorKind::Parameter, "tolerances must be strictly positive");
}

Mat omega0(int n) {
  Mat o = Mat::Zero(2 * n, 2 * n);
  o.topRightCorner(n, n).setIdentity();
  o.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return o;
}

Mat j0(int n) { return -omega0(n); }

int half_dim(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
    throw Error(ErrorKind::Dimension,
                "expected a square matrix of even dimension, got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  return static_cast<int>(m.rows() / 2);
}

double symplectic_residual(const Mat& m) {
  const Mat o = omega0(half_dim(m));
  return (m.transpose() * o * m - o).norm();
}

bool is_symplectic(const Mat& m, const Tolerances& tol) {
  const int n = half_dim(m);
  const double fro2 = m.squaredNorm();
  if (symplectic_residual(m) > tol.tol_symp * (1.0 + fro2)) return false;
  // det = 1 follows from the above; checked on its own with a size-aware bound.
  const double det = m.determinant();
  return std::abs(det - 1.0) <= tol.tol_symp * std::pow(1.0 + fro2 / (2.0 * n), n);
}

void require_symplectic(const Mat& m, const Tolerances& tol, const char* where) {
  if (!is_symplectic(m, tol))
    throw Error(ErrorKind::Contract,
                std::string(where) + ": matrix is not symplectic (residual " +
                    std::to_string(symplectic_residual(m)) + ")");
}

Polar polar_decompose(const Mat& a, const Tolerances& tol) {
  require_symplectic(a, tol, "polar_decompose");
  // SVD rather than eig(A^T A): keeps O accurate for badly conditioned A
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat& v = svd.matrixV();
  Mat o = svd.matrixU() * v.transpose();
  Mat p = v * svd.singularValues().asDiagonal() * v.transpose();
  p = 0.5 * (p + p.transpose());
  return {o, p};
}

cplx complex_det(const Mat& o, const Tolerances& tol) {
  const int n = half_dim(o);
  const Mat j = j0(n);
  if ((o * j - j * o).norm() > tol.tol_symp * (1.0 + o.norm()))
    throw Error(ErrorKind::Contract, "complex_det: matrix does not commute with J0");
  CMat z(n, n);
  z.real() = 0.5 * (o.topLeftCorner(n, n) + o.bottomRightCorner(n, n));
  z.imag() = 0.5 * (o.bottomLeftCorner(n, n) - o.topRightCorner(n, n));
  return z.determinant();
}

cplx normalize_unit(cplx z) {
  const double r = std::abs(z);
  if (r == 0.0) throw Error(ErrorKind::InternalConsistency, "cannot normalize zero");
  return z / r;
}

cplx rho_polar(const Mat& a, const Tolerances& tol) {
  Polar pd = polar_decompose(a, tol);
  return normalize_unit(complex_det(pd.O, tol));
}

cplx rho_hat(const Mat& a, const Tolerances& tol) {
  require_symplectic(a, tol, "rho_hat");
  const Mat j = j0(half_dim(a));
  const Mat c = 0.5 * (a - j * a * j);
  return normalize_unit(complex_det(c, tol));
}

Mat direct_sum_all(const std::vector<Mat>& parts) {
  int n = 0;
  for (const Mat& p : parts) n += half_dim(p);
  Mat out = Mat::Zero(2 * n, 2 * n);
  int off = 0;
  for (const Mat& p : parts) {
    const int k = half_dim(p);
    out.block(off, off, k, k) = p.topLeftCorner(k, k);
    out.block(off, n + off, k, k) = p.topRightCorner(k, k);
    out.block(n + off, off, k, k) = p.bottomLeftCorner(k, k);
    out.block(n + off, n + off, k, k) = p.bottomRightCorner(k, k);
    off += k;
  }
  return out;
}

Mat direct_sum(const Mat& a1, const Mat& a2) { return direct_sum_all({a1, a2}); }

Mat random_symmetric(int dim, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat s(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = scale * u(rng);
  return s;
}

Mat random_symplectic(int n, std::uint64_t seed, double scale) {
  if (n < 1) throw Error(ErrorKind::Parameter, "random_symplectic: n must be >= 1");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int factors = 3 + static_cast<int>(rng() % 4);
  Mat a = Mat::Identity(2 * n, 2 * n);
  const double s = scale / std::sqrt(2.0 * n);
  for (int i = 0; i < factors; ++i) a = a * exp_hamiltonian(random_symmetric(2 * n, rng(), s));
  return a;
}

Mat rotation(double phi) {
  Mat r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

Mat exp_hamiltonian(const Mat& s, double t) {
  const Mat x = t * (j0(half_dim(s)) * s);
  return x.exp();
}

Mat symplectic_inverse(const Mat& a) {
  const Mat o = omega0(half_dim(a));
  return -o * a.transpose() * o;
}

int signature(const Mat& sym, double zero_tol) {
  if (sym.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  int s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > zero_tol) ++s;
    else if (l < -zero_tol) --s;
  }
  return s;
}

double min_singular_value(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Mat w_plus(int n) { return -Mat::Identity(2 * n, 2 * n); }

Mat w_minus(int n) {
  Mat w = -Mat::Identity(2 * n, 2 * n);
  w(0, 0) = 2.0;
  w(n, n) = 0.5;
  return w;
}

Mat s_minus(int n) {
  Mat s = Mat::Identity(2 * n, 2 * n);
  s(0, 0) = s(n, n) = 0.0;
  s(0, n) = s(n, 0) = -std::log(2.0) / M_PI;
  return s;
}

}  // namespace symp
