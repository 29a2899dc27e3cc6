#include "symp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symp/core_linalg.hpp"

namespace symp {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::UnitNonReal: return "UnitNonReal";
    case Regime::PlusOne: return "PlusOne";
    case Regime::MinusOne: return "MinusOne";
    case Regime::RealPositive: return "RealPositive";
    case Regime::RealNegative: return "RealNegative";
    case Regime::OffCircleComplex: return "OffCircleComplex";
  }
  return "?";
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::vector<cplx> raw_eigenvalues(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::IllConditioned, "eigensolver did not converge");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + a.rows());
  return ev;
}

// Relative distance; eigenvalues of symplectic matrices are bounded away from 0.
double scaled_dist(cplx x, cplx y) { return std::abs(x - y) / std::max(std::abs(x), 1e-300); }

// Orthonormal basis of the invariant subspace belonging to a cluster: the m smallest
// right singular vectors of prod (A - mu_k).
CMat cluster_subspace(const Mat& a, const std::vector<cplx>& members) {
  const int d = static_cast<int>(a.rows());
  CMat p = CMat::Identity(d, d);
  const CMat ac = a.cast<cplx>();
  for (cplx mu : members) p = p * (ac - mu * CMat::Identity(d, d));
  Eigen::JacobiSVD<CMat> svd(p, Eigen::ComputeFullV);
  const int m = static_cast<int>(members.size());
  return svd.matrixV().rightCols(m);
}

void fill_krein(const Mat& a, Cluster& c, const Tolerances& tol, CMat* h_out = nullptr) {
  const CMat z = cluster_subspace(a, c.raw);
  const CMat om = omega0(half_dim(a)).cast<cplx>();
  CMat h = cplx(0, -1) * (z.transpose() * om * z.conjugate());
  h = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  c.krein_pos = c.krein_neg = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (std::abs(l) <= tol.tol_form)
      throw Error(ErrorKind::KreinDegenerate,
                  "Krein form degenerate at eigenvalue angle " +
                      std::to_string(std::arg(c.center)));
    (l > 0 ? c.krein_pos : c.krein_neg)++;
  }
  if (h_out) *h_out = h;
}

const Cluster* find_cluster(const SpectralAnalysis& sa, cplx lambda, double rad) {
  const Cluster* best = nullptr;
  double bd = 1e300;
  for (const Cluster& c : sa.clusters) {
    double d = scaled_dist(c.center, lambda);
    for (cplx r : c.raw) d = std::min(d, scaled_dist(r, lambda));
    if (d < bd) {
      bd = d;
      best = &c;
    }
  }
  return bd <= rad ? best : nullptr;
}

}  // namespace

SpectralAnalysis analyze_spectrum(const Mat& a, const Tolerances& tol, bool strict,
                                  bool with_krein) {
  SpectralAnalysis sa;
  sa.n = half_dim(a);
  const std::vector<cplx> ev = raw_eigenvalues(a);
  const int m = static_cast<int>(ev.size());
  const double r = tol.tol_eig;
  Dsu dsu(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const cplx x = ev[i], y = ev[j];
      const double s = std::abs(x);
      if (scaled_dist(x, y) <= r) dsu.unite(i, j);
      else if (std::abs(x.imag()) <= r * s && scaled_dist(std::conj(x), y) <= 3 * r)
        dsu.unite(i, j);
      else if (std::abs(std::abs(x) - 1.0) <= r && scaled_dist(1.0 / std::conj(x), y) <= 3 * r)
        dsu.unite(i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (dsu.find(i) == dsu.find(j)) continue;
      if (scaled_dist(ev[i], ev[j]) <= 10 * r) {
        if (strict)
          throw Error(ErrorKind::IllConditioned,
                      "eigenvalue clusters closer than 10*tol_eig but farther than tol_eig");
        if (dsu.unite(i, j)) ++sa.ambiguous_merges;
      }
    }

  std::vector<Cluster> raw_clusters;
  std::vector<int> slot(m, -1);
  for (int i = 0; i < m; ++i) {
    const int root = dsu.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(raw_clusters.size());
      raw_clusters.emplace_back();
    }
    raw_clusters[slot[root]].raw.push_back(ev[i]);
  }

  Cluster plus, minus;
  for (Cluster& c : raw_clusters) {
    cplx mean = 0;
    for (cplx z : c.raw) mean += z;
    mean /= static_cast<double>(c.raw.size());
    const double snap = 10 * r * std::abs(mean);
    if (std::abs(mean - 1.0) <= snap) {
      plus.raw.insert(plus.raw.end(), c.raw.begin(), c.raw.end());
      continue;
    }
    if (std::abs(mean + 1.0) <= snap) {
      minus.raw.insert(minus.raw.end(), c.raw.begin(), c.raw.end());
      continue;
    }
    if (std::abs(mean.imag()) <= snap) {
      c.center = mean.real();
      c.regime = mean.real() > 0 ? Regime::RealPositive : Regime::RealNegative;
    } else if (std::abs(std::abs(mean) - 1.0) <= snap) {
      c.center = mean / std::abs(mean);
      c.regime = Regime::UnitNonReal;
    } else {
      c.center = mean;
      c.regime = Regime::OffCircleComplex;
    }
    sa.clusters.push_back(c);
  }
  if (!plus.raw.empty()) {
    plus.center = 1.0;
    plus.regime = Regime::PlusOne;
    sa.clusters.push_back(plus);
  }
  if (!minus.raw.empty()) {
    minus.center = -1.0;
    minus.regime = Regime::MinusOne;
    sa.clusters.push_back(minus);
  }

  int mneg = 0;
  for (const Cluster& c : sa.clusters) {
    if ((c.regime == Regime::PlusOne || c.regime == Regime::MinusOne) && c.mult() % 2 != 0)
      throw Error(ErrorKind::IllConditioned, "odd multiplicity at eigenvalue +-1 after clustering");
    if (c.regime == Regime::RealNegative || c.regime == Regime::MinusOne) mneg += c.mult();
  }
  if (mneg % 2 != 0)
    throw Error(ErrorKind::IllConditioned, "odd total multiplicity of negative real eigenvalues");

  // deterministic order: by regime, then argument, then modulus
  std::sort(sa.clusters.begin(), sa.clusters.end(), [](const Cluster& x, const Cluster& y) {
    if (x.regime != y.regime) return x.regime < y.regime;
    if (std::arg(x.center) != std::arg(y.center)) return std::arg(x.center) < std::arg(y.center);
    return std::abs(x.center) < std::abs(y.center);
  });

  if (with_krein)
    for (Cluster& c : sa.clusters)
      if (c.regime == Regime::UnitNonReal) fill_krein(a, c, tol);
  return sa;
}

std::vector<EigenQuadruple> eigen_quadruples(const Mat& a, const Tolerances& tol) {
  const SpectralAnalysis sa = analyze_spectrum(a, tol, true, false);
  const int k = static_cast<int>(sa.clusters.size());
  std::vector<bool> used(k, false);
  std::vector<EigenQuadruple> out;
  const double rad = 10 * tol.tol_eig;
  for (int i = 0; i < k; ++i) {
    if (used[i]) continue;
    const Cluster& c = sa.clusters[i];
    const cplx l = c.center;
    const cplx cand[4] = {l, 1.0 / l, std::conj(l), 1.0 / std::conj(l)};
    EigenQuadruple q;
    q.regime = c.regime;
    q.alg_multiplicity = c.mult();
    for (cplx z : cand) {
      bool dup = false;
      for (cplx w : q.members) dup = dup || scaled_dist(w, z) <= rad;
      if (dup) continue;
      int hit = -1;
      for (int j = 0; j < k; ++j)
        if (!used[j] && scaled_dist(sa.clusters[j].center, z) <= rad) hit = j;
      if (hit < 0 || sa.clusters[hit].mult() != c.mult())
        throw Error(ErrorKind::IllConditioned, "eigenvalue quadruple is not closed");
      used[hit] = true;
      q.members.push_back(sa.clusters[hit].center);
    }
    q.representative = q.members.front();
    for (cplx z : q.members)
      if (std::abs(z) > std::abs(q.representative) + rad ||
          (std::abs(std::abs(z) - std::abs(q.representative)) <= rad &&
           z.imag() > q.representative.imag()))
        q.representative = z;
    out.push_back(q);
  }
  return out;
}

CMat generalized_eigenspace(const Mat& a, cplx lambda, const Tolerances& tol) {
  const SpectralAnalysis sa = analyze_spectrum(a, tol, false, false);
  const Cluster* c = find_cluster(sa, lambda, 10 * tol.tol_eig);
  if (!c) throw Error(ErrorKind::NotEigenvalue, "value is not an eigenvalue of the matrix");
  return cluster_subspace(a, c->raw);
}

int kernel_dimension(const Mat& a, cplx lambda, int power, const Tolerances& tol) {
  const int d = static_cast<int>(a.rows());
  CMat base = a.cast<cplx>() - lambda * CMat::Identity(d, d);
  CMat p = CMat::Identity(d, d);
  for (int i = 0; i < power; ++i) p = p * base;
  Eigen::JacobiSVD<CMat> svd(p);
  const auto& sv = svd.singularValues();
  const double thr = tol.tol_kernel * std::max(1.0, sv(0));
  int dim = 0;
  for (int i = 0; i < sv.size(); ++i) dim += sv(i) < thr ? 1 : 0;
  return dim;
}

KreinData krein_form(const Mat& a, cplx lambda, const Tolerances& tol) {
  if (std::abs(std::abs(lambda) - 1.0) > 10 * tol.tol_eig || std::abs(lambda.imag()) < 10 * tol.tol_eig)
    throw Error(ErrorKind::Contract, "krein_form: lambda must lie on the unit circle, off +-1");
  SpectralAnalysis sa = analyze_spectrum(a, tol, false, false);
  const Cluster* found = find_cluster(sa, lambda, 10 * tol.tol_eig);
  if (!found || found->regime != Regime::UnitNonReal)
    throw Error(ErrorKind::NotEigenvalue, "krein_form: lambda is not a unit eigenvalue");
  Cluster c = *found;
  KreinData kd;
  kd.lambda = c.center;
  fill_krein(a, c, tol, &kd.q_matrix);
  kd.m_plus = c.krein_pos;
  kd.m_minus = c.krein_neg;
  return kd;
}

std::vector<cplx> first_kind_eigenvalues(const Mat& a, const Tolerances& tol) {
  const SpectralAnalysis sa = analyze_spectrum(a, tol, false, true);
  std::vector<cplx> out;
  for (const Cluster& c : sa.clusters) {
    switch (c.regime) {
      case Regime::PlusOne:
      case Regime::MinusOne:
        out.insert(out.end(), c.mult() / 2, c.center);
        break;
      case Regime::UnitNonReal:
        if (c.center.imag() > 0) {
          out.insert(out.end(), c.krein_pos, c.center);
          out.insert(out.end(), c.krein_neg, std::conj(c.center));
        }
        break;
      default:
        if (std::abs(c.center) < 1.0) out.insert(out.end(), c.mult(), c.center);
    }
  }
  if (static_cast<int>(out.size()) != sa.n)
    throw Error(ErrorKind::IllConditioned, "first-kind selection did not produce n eigenvalues");
  return out;
}

cplx rho_from_analysis(const SpectralAnalysis& sa) {
  // Route 1: sign from negative reals times Krein-weighted unit eigenvalues.
  int mneg = 0;
  cplx unit = 1.0;
  for (const Cluster& c : sa.clusters) {
    if (c.regime == Regime::RealNegative || c.regime == Regime::MinusOne) mneg += c.mult();
    if (c.regime == Regime::UnitNonReal && c.center.imag() > 0)
      unit *= std::pow(c.center, c.krein_pos) * std::pow(std::conj(c.center), c.krein_neg);
  }
  const cplx r1 = ((mneg / 2) % 2 == 0 ? 1.0 : -1.0) * unit;

  // Route 2: product of first-kind phases.
  cplx r2 = 1.0;
  int count = 0;
  for (const Cluster& c : sa.clusters) {
    switch (c.regime) {
      case Regime::PlusOne:
      case Regime::MinusOne:
        r2 *= std::pow(c.center, c.mult() / 2);
        count += c.mult() / 2;
        break;
      case Regime::UnitNonReal:
        if (c.center.imag() > 0) {
          r2 *= std::pow(c.center, c.krein_pos) * std::pow(std::conj(c.center), c.krein_neg);
          count += c.mult();
        }
        break;
      default:
        if (std::abs(c.center) < 1.0) {
          r2 *= std::pow(c.center / std::abs(c.center), c.mult());
          count += c.mult();
        }
    }
  }
  if (count != sa.n || std::abs(r1 - r2) > 1e-9)
    throw Error(ErrorKind::IllConditioned,
                "rho: eigenvalue pairing inconsistent (first-kind count or product mismatch)");
  return r1;
}

cplx rho(const Mat& a, const Tolerances& tol) {
  require_symplectic(a, tol, "rho");
  return rho_from_analysis(analyze_spectrum(a, tol, false, true));
}

}  // namespace symp
