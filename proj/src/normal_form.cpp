#include "symp/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "symp/core_linalg.hpp"

namespace symp {

const char* block_case_name(BlockCase c) {
  switch (c) {
    case BlockCase::OffCircleReal: return "OffCircleReal";
    case BlockCase::OffCircleComplex: return "OffCircleComplex";
    case BlockCase::PlusMinusOne: return "PlusMinusOne";
    case BlockCase::UnitNonRealEven: return "UnitNonRealEven";
    case BlockCase::UnitNonRealOdd: return "UnitNonRealOdd";
  }
  return "?";
}

int NormalFormBlock::size() const {
  switch (kind) {
    case BlockCase::OffCircleReal: return 2 * jordan_order;
    case BlockCase::OffCircleComplex: return 4 * jordan_order;
    default: return 2 * jordan_order;
  }
}

namespace {

constexpr double kPi = 3.14159265358979323846;
// Eigenvalues closer than this (relative) are one Jordan cluster. Generated test
// inputs keep distinct eigenvalues >= 0.3 apart.
constexpr double kCoarse = 0.03;

template <class M>
M mpow(const M& x, int k) {
  M r = M::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

// log(I + N) for N nilpotent; the series stops at the dimension.
template <class M>
M nil_log(const M& n) {
  M out = M::Zero(n.rows(), n.cols());
  M pk = n;
  for (int k = 1; k <= n.rows(); ++k) {
    out += ((k % 2) ? 1.0 : -1.0) / k * pk;
    pk = pk * n;
  }
  return out;
}

// Largest j with L^j numerically nonzero.
template <class M>
int nil_order(const M& l) {
  const double base = std::max(1.0, l.norm());
  M pk = l;
  int p = 0;
  for (int j = 1; j <= l.rows(); ++j) {
    if (pk.norm() <= 1e-7 * std::pow(base, j)) break;
    p = j;
    pk = pk * l;
  }
  return p;
}

template <class M>
M right_null(const M& m, int dim) {
  Eigen::JacobiSVD<M> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

Mat upper_model(const Mat& p, const Mat& s) {
  const int k = static_cast<int>(p.rows());
  const Mat pit = p.inverse().transpose();
  Mat m = Mat::Zero(2 * k, 2 * k);
  m.topLeftCorner(k, k) = p;
  m.topRightCorner(k, k) = s * pit;
  m.bottomRightCorner(k, k) = pit;
  return m;
}

// Unit-circle data of a matrix on a single chain at e^{i phi}.
struct UnitChain {
  CMat e;        // basis of the generalized eigenspace
  CMat l;        // log(lambda^-1 A) on it
  CMat g;        // G = E^T Omega conj(E)
  int p = 0;
};

UnitChain unit_chain(const Mat& a, const Mat& om, cplx lambda, int h) {
  UnitChain u;
  const int d = static_cast<int>(a.rows());
  const CMat ac = a.cast<cplx>();
  u.e = right_null(CMat(mpow(CMat(ac - lambda * CMat::Identity(d, d)), h)), h);
  const CMat ae = u.e.adjoint() * ac * u.e;
  u.l = nil_log(CMat(std::conj(lambda) * ae - CMat::Identity(h, h)));
  u.p = nil_order(u.l);
  u.g = u.e.transpose() * om.cast<cplx>() * u.e.conjugate();
  return u;
}

// h_j(y) = Omega(y, conj(L^j y)) in chain coordinates.
cplx hform(const UnitChain& u, const CVec& y, int j) {
  return (y.transpose() * u.g * mpow(CMat(u.l.conjugate()), j) * y.conjugate())(0, 0);
}

cplx top_coef(int p) { return (p % 2) ? cplx(1, 0) : cplx(0, -1); }

// Cyclic coordinate vector for a single chain: the unit vector with largest L^p image.
template <class M>
int cyclic_index(const M& l, int p) {
  const M lp = mpow(l, p);
  int best = 0;
  for (int i = 1; i < lp.cols(); ++i)
    if (lp.col(i).norm() > lp.col(best).norm()) best = i;
  return best;
}

int unit_sign(const Mat& m, double phi, int s) {
  const cplx lambda = std::polar(1.0, phi);
  const UnitChain u = unit_chain(m, omega0(s), lambda, s);
  if (u.p != s - 1)
    throw Error(ErrorKind::InternalConsistency, "unit model is not a single chain");
  CVec x0 = CVec::Zero(s);
  x0(cyclic_index(u.l, u.p)) = 1.0;
  const double v = (top_coef(u.p) * hform(u, x0, u.p)).real();
  return v > 0 ? 1 : -1;
}

Mat unit_model_raw(int s, double phi, int tau) {
  if (s % 2 == 0) {
    const int k = s / 2;
    const Mat p = jordan_real_block(1.0, phi, k);
    Mat sm = Mat::Zero(s, s);
    sm.bottomRightCorner(2, 2) = tau * Mat::Identity(2, 2);
    return upper_model(p, sm);
  }
  const int k = (s - 1) / 2;
  const double th = tau * phi;
  const double c = std::cos(th), sn = std::sin(th);
  Mat p = Mat::Identity(s, s);
  Mat sm = Mat::Zero(s, s);
  if (k > 0) {
    p.topLeftCorner(2 * k, 2 * k) = jordan_real_block(1.0, phi, k);
    // coupling into the last rotation pair; the sign of S has to follow theta or
    // the chain splits
    p(2 * k - 2, 2 * k) = 1.0;
    sm(2 * k - 1, 2 * k) = sm(2 * k, 2 * k - 1) = tau;
  }
  Mat g = Mat::Identity(2 * s, 2 * s);
  g(s - 1, s - 1) = c;
  g(s - 1, 2 * s - 1) = -sn;
  g(2 * s - 1, s - 1) = sn;
  g(2 * s - 1, 2 * s - 1) = c;
  return upper_model(p, sm) * g;
}

Mat unit_model(int s, double phi, int sign) {
  Mat m = unit_model_raw(s, phi, 1);
  if (unit_sign(m, phi, s) == sign) return m;
  m = unit_model_raw(s, phi, -1);
  if (unit_sign(m, phi, s) != sign)
    throw Error(ErrorKind::InternalConsistency, "unit model sign not realizable");
  return m;
}

void check_param(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::Parameter, "invalid block: " + msg);
}

// ---------------------------------------------------------------------------
// Per-case extraction. Each works in coordinates of an invariant subspace W with
// restricted A_W and Omega_W and returns the block plus a d x size matrix whose
// columns are the block's symplectic basis (e-part then f-part).

struct Piece {
  NormalFormBlock block;
  Mat x;
};

void require_form(double v, double scale, const Tolerances& tol, const char* what) {
  if (std::abs(v) <= tol.tol_form * std::max(1.0, scale))
    throw Error(ErrorKind::IllConditioned, std::string("degenerate pairing in ") + what);
}

template <class M, class V>
M chain_matrix(const M& l, const V& y, int len) {
  M out(y.size(), len);
  V v = y;
  for (int i = 0; i < len; ++i) {
    out.col(i) = v;
    v = l * v;
  }
  return out;
}

Piece extract_off_real(const Mat& aw, const Mat& ow, double lambda, const Tolerances& tol) {
  const int d = static_cast<int>(aw.rows());
  const int m = d / 2;
  const double mu = 1.0 / lambda;
  const Mat id = Mat::Identity(d, d);
  const Mat nl = aw - lambda * id, nm = aw - mu * id;
  const Mat el = right_null(Mat(mpow(nl, m)), m);
  const Mat em = right_null(Mat(mpow(nm, m)), m);
  const int p = nil_order(Mat(el.transpose() * nl * el));
  const Mat mm = (mpow(nl, p) * el).transpose() * ow * em;
  Eigen::JacobiSVD<Mat> svd(mm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  require_form(svd.singularValues()(0), 1.0, tol, "off-circle real block");
  const Vec v = el * svd.matrixU().col(0);
  const Vec w = em * svd.matrixV().col(0);
  const int len = p + 1;
  Mat e(d, len), ep(d, len);
  for (int i = 0; i < len; ++i) {
    e.col(i) = mpow(nl, p - i) * v;
    ep.col(i) = mpow(nm, i) * w;
  }
  const Mat g = e.transpose() * ow * ep;
  Piece out;
  out.block.kind = BlockCase::OffCircleReal;
  out.block.lambda = lambda;
  out.block.jordan_order = len;
  out.x.resize(d, 2 * len);
  out.x << e, ep * g.inverse();
  return out;
}

Piece extract_off_complex(const Mat& aw, const Mat& ow, cplx lambda, const Tolerances& tol) {
  const int d = static_cast<int>(aw.rows());
  const int m = d / 4;
  const cplx mu = 1.0 / lambda;
  const CMat id = CMat::Identity(d, d);
  const CMat ac = aw.cast<cplx>(), oc = ow.cast<cplx>();
  const CMat nl = ac - lambda * id, nm = ac - mu * id;
  const CMat el = right_null(CMat(mpow(nl, m)), m);
  const CMat em = right_null(CMat(mpow(nm, m)), m);
  const int p = nil_order(CMat(el.adjoint() * nl * el));
  const CMat mm = (mpow(nl, p) * el).transpose() * oc * em;
  Eigen::JacobiSVD<CMat> svd(mm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  require_form(svd.singularValues()(0), 1.0, tol, "off-circle complex block");
  const CVec v = el * svd.matrixU().col(0).conjugate();
  const CVec w = em * svd.matrixV().col(0);
  const int len = p + 1;
  CMat e(d, len), ep(d, len);
  for (int i = 0; i < len; ++i) {
    e.col(i) = mpow(nl, p - i) * v;
    ep.col(i) = mpow(nm, i) * w;
  }
  const CMat g = e.transpose() * oc * ep;
  const CMat f = ep * g.inverse();
  const double s2 = std::sqrt(2.0);
  Piece out;
  out.block.kind = BlockCase::OffCircleComplex;
  out.block.r = std::abs(lambda);
  out.block.phi = std::arg(lambda);
  out.block.jordan_order = len;
  out.x.resize(d, 4 * len);
  for (int i = 0; i < len; ++i) {
    out.x.col(2 * i) = s2 * e.col(i).real();
    out.x.col(2 * i + 1) = -s2 * e.col(i).imag();
    out.x.col(2 * len + 2 * i) = s2 * f.col(i).real();
    out.x.col(2 * len + 2 * i + 1) = s2 * f.col(i).imag();
  }
  return out;
}

Piece extract_pm1(const Mat& aw, const Mat& ow, double lambda, const Tolerances& tol) {
  const int d = static_cast<int>(aw.rows());
  const Mat l = nil_log(Mat(lambda * aw - Mat::Identity(d, d)));
  const int p = nil_order(l);
  const Mat f = ow * mpow(l, p);
  auto beta = [&](const Mat& om, const Mat& ll, const Vec& y, int j) {
    return y.dot(om * mpow(ll, j) * y);
  };
  Piece out;
  out.block.kind = BlockCase::PlusMinusOne;
  out.block.lambda = lambda;

  if (p % 2 == 1) {
    // single chain of even length, symmetric top form
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (f + f.transpose()));
    int best = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
    const double top = es.eigenvalues()(best);
    require_form(top, f.norm(), tol, "+-1 block (odd p)");
    const int k = (p + 1) / 2;
    NormalFormBlock b = out.block;
    b.jordan_order = k;
    Mat model;
    int sign_model = 0;
    for (int dd : {1, -1}) {
      b.d = dd;
      model = block_matrix(b);
      const Mat lt = nil_log(Mat(lambda * model - Mat::Identity(2 * k, 2 * k)));
      Vec x0 = Vec::Zero(2 * k);
      x0(cyclic_index(lt, p)) = 1.0;
      sign_model = beta(omega0(k), lt, x0, p) > 0 ? 1 : -1;
      if (sign_model == (top > 0 ? 1 : -1)) break;
    }
    if (sign_model != (top > 0 ? 1 : -1))
      throw Error(ErrorKind::InternalConsistency, "no +-1 model with matching sign");
    const Mat om = omega0(k);
    const Mat lt = nil_log(Mat(lambda * model - Mat::Identity(2 * k, 2 * k)));
    Vec x0 = Vec::Zero(2 * k);
    x0(cyclic_index(lt, p)) = 1.0;
    Vec y = es.eigenvectors().col(best);
    y *= std::sqrt(beta(om, lt, x0, p) / beta(ow, l, y, p));
    for (int s = 2; s <= p - 1; s += 2) {
      const int j = p - s;
      const double g = (beta(om, lt, x0, j) - beta(ow, l, y, j)) / (2.0 * beta(ow, l, y, p));
      y += g * (mpow(l, s) * y);
    }
    out.block = b;
    out.x = chain_matrix(l, y, p + 1) * chain_matrix(lt, x0, p + 1).inverse();
    return out;
  }

  // pair of odd chains, antisymmetric top form
  Eigen::JacobiSVD<Mat> svd(0.5 * (f - f.transpose()), Eigen::ComputeFullU | Eigen::ComputeFullV);
  require_form(svd.singularValues()(0), f.norm(), tol, "+-1 block (even p)");
  const int len = p + 1;
  NormalFormBlock b = out.block;
  b.jordan_order = len;
  b.d = 0;
  const Mat model = block_matrix(b);
  const Mat om = omega0(len);
  const Mat lt = nil_log(Mat(lambda * model - Mat::Identity(2 * len, 2 * len)));
  Vec es = Vec::Zero(2 * len), fs = Vec::Zero(2 * len);
  es(len - 1) = 1.0;
  fs(len) = 1.0;
  auto cross = [&](const Mat& o, const Mat& ll, const Vec& y, const Vec& z, int j) {
    return y.dot(o * mpow(ll, j) * z);
  };
  Vec y = svd.matrixU().col(0);
  Vec z = svd.matrixV().col(0);
  const double gtp = cross(om, lt, es, fs, p);
  z *= gtp / cross(ow, l, y, z, p);
  for (int j = p - 1; j >= 1; j -= 2) {
    const double g = -beta(ow, l, y, j) / (2.0 * cross(ow, l, y, z, p));
    y += g * (mpow(l, p - j) * z);
  }
  for (int j = p - 1; j >= 1; j -= 2) {
    const double g = beta(ow, l, z, j) / (2.0 * cross(ow, l, y, z, p));
    z += g * (mpow(l, p - j) * y);
  }
  std::vector<double> gv(p + 1), q(p + 1, 0.0);
  for (int j = 0; j <= p; ++j) gv[j] = cross(ow, l, y, z, j);
  for (int jj = p; jj >= 0; --jj) {
    const int idx = p - jj;
    double acc = cross(om, lt, es, fs, jj);
    for (int i = 0; i < idx; ++i) acc -= q[i] * gv[i + jj];
    q[idx] = acc / gv[p];
  }
  Vec z2 = Vec::Zero(d);
  for (int i = 0; i <= p; ++i) z2 += q[i] * (mpow(l, i) * z);
  Mat yz(d, 2 * len), ef(2 * len, 2 * len);
  yz << chain_matrix(l, y, len), chain_matrix(l, z2, len);
  ef << chain_matrix(lt, es, len), chain_matrix(lt, fs, len);
  out.block = b;
  out.x = yz * ef.inverse();
  return out;
}

Piece extract_unit(const Mat& aw, const Mat& ow, double phi, const Tolerances& tol) {
  const int d = static_cast<int>(aw.rows());
  const cplx lambda = std::polar(1.0, phi);
  const UnitChain u = unit_chain(aw, ow, lambda, d / 2);
  const int p = u.p, s = p + 1;
  const cplx cp = top_coef(p);
  CMat hm = cp * u.g * mpow(CMat(u.l.conjugate()), p);
  hm = 0.5 * (hm + hm.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(hm);
  int best = 0;
  for (int i = 1; i < hm.rows(); ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  const double top = es.eigenvalues()(best);
  require_form(top, hm.norm(), tol, "unit-circle block");
  const int sign = top > 0 ? 1 : -1;

  const Mat model = unit_model(s, phi, sign);
  const UnitChain um = unit_chain(model, omega0(s), lambda, s);
  CVec x0 = CVec::Zero(s);
  x0(cyclic_index(um.l, p)) = 1.0;

  CVec y = es.eigenvectors().col(best).conjugate();
  const double ratio = (hform(um, x0, p) / hform(u, y, p)).real();
  if (!(ratio > 0)) throw Error(ErrorKind::InternalConsistency, "unit chain sign mismatch");
  y *= std::sqrt(ratio);
  for (int m = 1; m <= p; ++m) {
    const int j = p - m;
    const cplx delta = hform(um, x0, j) - hform(u, y, j);
    const cplx h = hform(u, y, p);
    cplx g;
    if (m % 2 == 0)
      g = (delta / (2.0 * h)).real();
    else
      g = cplx(0, (delta / (cplx(0, -2) * h)).real());
    y += g * (mpow(u.l, m) * y);
  }
  const CMat yc = u.e * chain_matrix(u.l, y, s);
  const CMat zc = um.e * chain_matrix(um.l, x0, s);
  CMat yy(d, 2 * s), zz(2 * s, 2 * s);
  yy << yc, yc.conjugate();
  zz << zc, zc.conjugate();
  Piece out;
  out.block.kind = (s % 2) ? BlockCase::UnitNonRealOdd : BlockCase::UnitNonRealEven;
  out.block.phi = phi;
  out.block.jordan_order = s;
  out.block.d = sign;
  out.x = (yy * zz.inverse()).real();
  return out;
}

// Quadruple groups at the coarse radius.
struct Group {
  enum Kind { PM1, OffReal, OffComplex, Unit } kind;
  cplx rep;
  std::vector<cplx> raw;
};

cplx quad_rep(cplx z) {
  if (std::abs(z) < 1.0) z = 1.0 / z;
  if (z.imag() < 0) z = std::conj(z);
  return z;
}

std::vector<Group> coarse_groups(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::IllConditioned, "eigensolver did not converge");
  const int d = static_cast<int>(a.rows());
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      const cplx a1 = quad_rep(ev[i]), a2 = quad_rep(ev[j]);
      if (std::abs(a1 - a2) <= kCoarse * std::abs(a1)) parent[find(i)] = find(j);
    }
  std::vector<Group> out;
  std::vector<int> idx(d, -1);
  for (int i = 0; i < d; ++i) {
    const int r = find(i);
    if (idx[r] < 0) {
      idx[r] = static_cast<int>(out.size());
      out.push_back({});
    }
    out[idx[r]].raw.push_back(ev[i]);
  }
  for (Group& g : out) {
    cplx c = 0;
    for (cplx z : g.raw) c += quad_rep(z);
    c /= static_cast<double>(g.raw.size());
    if (std::abs(c - 1.0) <= kCoarse) {
      g.kind = Group::PM1, g.rep = 1.0;
    } else if (std::abs(c + 1.0) <= kCoarse) {
      g.kind = Group::PM1, g.rep = -1.0;
    } else if (std::abs(c.imag()) <= kCoarse * std::abs(c)) {
      g.kind = Group::OffReal, g.rep = c.real();
    } else if (std::abs(std::abs(c) - 1.0) <= kCoarse) {
      g.kind = Group::Unit, g.rep = std::polar(1.0, std::arg(c));
    } else {
      g.kind = Group::OffComplex, g.rep = c;
    }
  }
  return out;
}

std::vector<Piece> split_group(const Mat& a, const Mat& om, const Group& g, const Tolerances& tol) {
  const int dtot = static_cast<int>(a.rows());
  const int dim = static_cast<int>(g.raw.size());
  CMat prod = CMat::Identity(dtot, dtot);
  for (cplx mu : g.raw) prod = prod * (a.cast<cplx>() - mu * CMat::Identity(dtot, dtot));
  Mat basis = right_null(Mat(prod.real()), dim);
  std::vector<Piece> pieces;
  while (basis.cols() > 0) {
    const Mat aw = basis.transpose() * a * basis;
    const Mat ow = basis.transpose() * om * basis;
    Piece pc;
    switch (g.kind) {
      case Group::PM1: pc = extract_pm1(aw, ow, g.rep.real(), tol); break;
      case Group::OffReal: pc = extract_off_real(aw, ow, g.rep.real(), tol); break;
      case Group::OffComplex: pc = extract_off_complex(aw, ow, g.rep, tol); break;
      case Group::Unit: pc = extract_unit(aw, ow, std::arg(g.rep), tol); break;
    }
    const int rest = static_cast<int>(basis.cols()) - static_cast<int>(pc.x.cols());
    const Mat comp = rest > 0 ? right_null(Mat(pc.x.transpose() * ow), rest) : Mat(basis.cols(), 0);
    pc.x = basis * pc.x;
    pieces.push_back(std::move(pc));
    basis = basis * comp;
  }
  return pieces;
}

double quantize(double x) { return std::round(x * 1e4) / 1e4; }

BlockInvariant invariant(const NormalFormBlock& b) {
  BlockInvariant iv{static_cast<int>(b.kind), b.jordan_order, 0.0, 0.0, b.d};
  switch (b.kind) {
    case BlockCase::OffCircleReal: iv.p1 = quantize(b.lambda); break;
    case BlockCase::OffCircleComplex:
      iv.p1 = quantize(b.r);
      iv.p2 = quantize(b.phi);
      break;
    case BlockCase::PlusMinusOne: iv.p1 = quantize(b.lambda); break;
    default: iv.p1 = quantize(b.phi); break;
  }
  return iv;
}

}  // namespace

Mat jordan_block(double lambda, int m) {
  Mat j = lambda * Mat::Identity(m, m);
  for (int i = 0; i + 1 < m; ++i) j(i, i + 1) = 1.0;
  return j;
}

Mat jordan_real_block(double r, double phi, int m) {
  Mat j = Mat::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    j.block(2 * i, 2 * i, 2, 2) = r * rotation(phi);
    if (i + 1 < m) j.block(2 * i, 2 * i + 2, 2, 2) = Mat::Identity(2, 2);
  }
  return j;
}

Mat block_matrix(const NormalFormBlock& b) {
  check_param(b.jordan_order >= 1, "jordan_order must be >= 1");
  const int m = b.jordan_order;
  switch (b.kind) {
    case BlockCase::OffCircleReal: {
      check_param(b.lambda != 0 && std::abs(std::abs(b.lambda) - 1.0) > 1e-12,
                  "OffCircleReal needs |lambda| != 1");
      return upper_model(jordan_block(b.lambda, m), Mat::Zero(m, m));
    }
    case BlockCase::OffCircleComplex: {
      check_param(b.r > 0 && std::abs(b.r - 1.0) > 1e-12, "r must lie in (0,1) u (1,inf)");
      check_param(std::abs(std::sin(b.phi)) > 1e-12, "phi must be non-real");
      return upper_model(jordan_real_block(b.r, b.phi, m), Mat::Zero(2 * m, 2 * m));
    }
    case BlockCase::PlusMinusOne: {
      check_param(b.lambda == 1.0 || b.lambda == -1.0, "lambda must be +-1");
      check_param(b.d >= -1 && b.d <= 1, "d must be in {-1,0,1}");
      check_param(b.d != 0 || m % 2 == 1, "d = 0 needs odd order");
      Mat s = Mat::Zero(m, m);
      s(m - 1, m - 1) = b.d;
      return upper_model(jordan_block(b.lambda, m), s);
    }
    case BlockCase::UnitNonRealEven:
    case BlockCase::UnitNonRealOdd: {
      check_param(b.phi > 0 && b.phi < kPi, "phi must be in (0, pi)");
      check_param(b.d == 1 || b.d == -1, "unit block sign must be +-1");
      check_param((m % 2 == 1) == (b.kind == BlockCase::UnitNonRealOdd), "order parity");
      return unit_model(m, b.phi, b.d);
    }
  }
  throw Error(ErrorKind::Parameter, "unknown block case");
}

Mat assemble(const std::vector<NormalFormBlock>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::Parameter, "assemble: no blocks");
  std::vector<Mat> parts;
  for (const auto& b : blocks) parts.push_back(block_matrix(b));
  return direct_sum_all(parts);
}

NormalFormReport normal_form(const Mat& a, const Tolerances& tol) {
  tol.validate();
  require_symplectic(a, tol, "normal_form");
  const int n = half_dim(a);
  const Mat om = omega0(n);
  std::vector<Piece> pieces;
  for (const Group& g : coarse_groups(a))
    for (Piece& p : split_group(a, om, g, tol)) pieces.push_back(std::move(p));
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    return invariant(x.block) < invariant(y.block);
  });

  NormalFormReport rep;
  rep.basis.resize(2 * n, 2 * n);
  int off = 0;
  for (const Piece& p : pieces) {
    const int k = p.block.size() / 2;
    rep.basis.middleCols(off, k) = p.x.leftCols(k);
    rep.basis.middleCols(n + off, k) = p.x.rightCols(k);
    off += k;
    rep.blocks.push_back(p.block);
  }
  if (off != n) throw Error(ErrorKind::InternalConsistency, "normal_form: block sizes do not add up");
  const Mat nf = assemble(rep.blocks);
  rep.residual = (rep.basis.inverse() * a * rep.basis - nf).norm();
  if (!(rep.residual <= tol.tol_nf))
    throw NormalFormError("normal_form residual " + std::to_string(rep.residual) +
                              " above tol_nf",
                          rep);
  return rep;
}

std::vector<BlockInvariant> invariants_of(const NormalFormReport& report) {
  std::vector<BlockInvariant> out;
  for (const auto& b : report.blocks) out.push_back(invariant(b));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Symplectic stretch S for one block, in block coordinates.
Mat block_stretch(const NormalFormBlock& b, const std::vector<double>& eps, std::size_t& next) {
  const int k = b.size() / 2;
  Vec dg = Vec::Ones(k);
  double rot = 0.0;
  switch (b.kind) {
    case BlockCase::OffCircleReal:
    case BlockCase::PlusMinusOne:
      for (int i = 0; i < k; ++i) dg(i) = 1.0 + eps[next++];
      break;
    case BlockCase::OffCircleComplex:
    case BlockCase::UnitNonRealEven:
      for (int i = 0; i < k / 2; ++i) dg(2 * i) = dg(2 * i + 1) = 1.0 + eps[next++];
      break;
    case BlockCase::UnitNonRealOdd:
      for (int i = 0; i < k / 2; ++i) dg(2 * i) = dg(2 * i + 1) = 1.0 + eps[next++];
      rot = eps[next++];
      break;
  }
  Mat s = Mat::Zero(2 * k, 2 * k);
  s.topLeftCorner(k, k) = dg.asDiagonal();
  s.bottomRightCorner(k, k) = dg.cwiseInverse().asDiagonal();
  if (b.kind == BlockCase::UnitNonRealOdd) {
    s(k - 1, k - 1) = s(2 * k - 1, 2 * k - 1) = std::cos(rot);
    s(k - 1, 2 * k - 1) = -std::sin(rot);
    s(2 * k - 1, k - 1) = std::sin(rot);
  }
  return s;
}

bool distinct_spectrum(const Mat& a, const Tolerances& tol) {
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() != Eigen::Success) return false;
  const auto& ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i)
    for (int j = 0; j < i; ++j) {
      const double sc = std::max(std::abs(ev(i)), std::abs(ev(j)));
      if (std::abs(ev(i) - ev(j)) <= 30.0 * tol.tol_eig * sc) return false;
    }
  return true;
}

}  // namespace

Mat semisimple_perturb(const Mat& a, double eps, std::uint64_t seed, const Tolerances& tol) {
  if (!(eps > 0 && eps < 0.05))
    throw Error(ErrorKind::Parameter, "semisimple_perturb: eps must lie in (0, 0.05)");
  const NormalFormReport rep = normal_form(a, tol);
  const int n = half_dim(a);
  const Mat kinv = rep.basis.inverse();
  const double d0 = (a - Mat::Identity(2 * n, 2 * n)).determinant();
  const bool check_sign = std::abs(d0) > 1e-10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int attempt = 0; attempt < 8; ++attempt) {
    // stratified draws keep the factors apart
    std::vector<double> e(2 * n + 1);
    std::vector<int> order(e.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = eps * (1.0 + (order[i] + u(rng)) / static_cast<double>(e.size()));
    std::vector<Mat> parts;
    std::size_t next = 0;
    for (const auto& b : rep.blocks) parts.push_back(block_stretch(b, e, next));
    const Mat s = rep.basis * direct_sum_all(parts) * kinv;
    const Mat ap = a * s;
    if (!distinct_spectrum(ap, tol)) continue;
    if (check_sign && (ap - Mat::Identity(2 * n, 2 * n)).determinant() * d0 <= 0) continue;
    return ap;
  }
  throw Error(ErrorKind::PerturbationFailure, "semisimple_perturb: no admissible draw in 8 tries");
}

}  // namespace symp
