#include "symp/index_rs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crossing_scan.hpp"
#include "symp/core_linalg.hpp"

namespace symp {

namespace detail {

namespace {

double golden_min(const std::function<double(double)>& f, double a, double b, double width) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void finish_report(CrossingReport& r, double scale, const Tolerances& tol) {
  r.gamma = 0.5 * (r.gamma + r.gamma.transpose());
  r.kernel_dim = static_cast<int>(r.gamma.rows());
  if (r.kernel_dim == 0) return;
  Eigen::SelfAdjointEigenSolver<Mat> es(r.gamma);
  const Vec& ev = es.eigenvalues();
  const double floor = std::max(tol.tol_form, 1e-6) * (1.0 + scale);
  r.regular = ev.cwiseAbs().minCoeff() > floor;
  r.signature = 0;
  for (int i = 0; i < ev.size(); ++i) r.signature += ev(i) > 0 ? 1 : -1;
}

std::int64_t scan_crossings(const ScanProblem& sp, const Tolerances& tol, Exec ex,
                            std::vector<CrossingReport>& out) {
  const std::vector<double> ts = uniform_grid(0.0, 1.0, kScanPoints);
  const std::vector<double> s = map_grid(ts, sp.smin, ex);
  const double thr = tol.tol_kernel;
  const int m = kScanPoints;

  if (std::all_of(s.begin(), s.end(), [&](double x) { return x < thr; })) {
    const std::vector<double> dims =
        map_grid(ts, [&](double t) { return static_cast<double>(sp.kernel_dim(t)); }, ex);
    if (std::all_of(dims.begin(), dims.end(), [&](double d) { return d == dims[0]; })) return 0;
    throw Error(ErrorKind::UnsupportedStructure,
                "crossing scan: kernel dimension changes inside a plateau");
  }
  for (int i = 0; i + 1 < m; ++i)
    if (s[i] < thr && s[i + 1] < thr)
      throw Error(ErrorKind::UnsupportedStructure,
                  "crossing scan: plateau of nontrivial kernel near t=" + std::to_string(ts[i]));

  std::vector<double> cand;
  if (s[0] < thr) cand.push_back(0.0);
  if (s[m - 1] < thr) cand.push_back(1.0);
  // every grid-local minimum is refined: a crossing between grid points can leave its
  // nearest sample far above any fixed prefilter
  for (int i = 0; i < m; ++i) {
    if (i > 0 && s[i] > s[i - 1]) continue;
    if (i + 1 < m && s[i] > s[i + 1]) continue;
    const double a = ts[std::max(i - 1, 0)], b = ts[std::min(i + 1, m - 1)];
    double t = golden_min(sp.smin, a, b, 1e-10);
    if (t < 1e-9) t = 0.0;
    if (t > 1.0 - 1e-9) t = 1.0;
    if (sp.smin(t) < thr) cand.push_back(t);
  }
  std::sort(cand.begin(), cand.end());
  std::vector<double> uniq;
  for (double t : cand) {
    if (!uniq.empty() && t - uniq.back() < 1e-8) {
      if (t == 1.0) uniq.back() = 1.0;
      continue;
    }
    uniq.push_back(t);
  }

  std::int64_t doubled = 0;
  std::vector<CrossingReport> found;
  for (double t : uniq) {
    CrossingReport r = sp.classify(t);
    if (r.kernel_dim == 0) continue;
    r.t = t;
    r.endpoint = t == 0.0 || t == 1.0;
    if (!r.regular)
      throw Error(ErrorKind::IrregularCrossing,
                  "irregular crossing at t=" + std::to_string(t) + " (kernel dim " +
                      std::to_string(r.kernel_dim) + ")");
    doubled += (r.endpoint ? 1 : 2) * r.signature;
    found.push_back(std::move(r));
  }
  out.insert(out.end(), found.begin(), found.end());
  return doubled;
}

std::vector<SminSample> smin_trace(const ScanProblem& sp, Exec ex, const Tolerances&) {
  const std::vector<double> ts = uniform_grid(0.0, 1.0, kScanPoints);
  const std::vector<double> s = map_grid(ts, sp.smin, ex);
  const std::vector<double> d =
      map_grid(ts, [&](double t) { return static_cast<double>(sp.kernel_dim(t)); }, ex);
  std::vector<SminSample> out;
  for (int i = 0; i < kScanPoints; ++i) out.push_back({ts[i], s[i], static_cast<int>(d[i])});
  return out;
}

}  // namespace detail

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Svd {
  Vec sv;
  Mat v;
  double scale;
};

Svd svd_minus_id(const Path& p, double t) {
  const int d = 2 * p->n;
  Eigen::JacobiSVD<Mat> svd(evaluate(p, t) - Mat::Identity(d, d), Eigen::ComputeFullV);
  return {svd.singularValues(), svd.matrixV(), std::max(1.0, svd.singularValues()(0))};
}

int count_small(const Svd& s, double thr) {
  int k = 0;
  for (int i = 0; i < s.sv.size(); ++i) k += s.sv(i) / s.scale < thr;
  return k;
}

detail::ScanProblem symplectic_problem(const Path& p, const Tolerances& tol) {
  detail::ScanProblem sp;
  sp.smin = [p](double t) {
    const Svd s = svd_minus_id(p, t);
    return s.sv(s.sv.size() - 1) / s.scale;
  };
  sp.kernel_dim = [p, tol](double t) { return count_small(svd_minus_id(p, t), tol.tol_kernel); };
  sp.classify = [p, tol](double t) {
    const Svd s = svd_minus_id(p, t);
    const int k = count_small(s, tol.tol_kernel);
    CrossingReport r;
    r.kernel_basis = s.v.rightCols(k);
    const Mat st = generator(p, t).s;
    r.gamma = r.kernel_basis.transpose() * st * r.kernel_basis;
    detail::finish_report(r, st.norm(), tol);
    return r;
  };
  return sp;
}

int sym_signature(const Mat& s) {
  return signature(0.5 * (s + s.transpose()), 1e-10 * std::max(1.0, s.norm()));
}

// t in [0,1] of a node maps to a + (b - a) t in the caller's parameter
struct Range {
  double a, b;
  double map(double t) const { return a + (b - a) * t; }
  Range sub(double u, double v) const { return {map(u), map(v)}; }
};

class RsWalker {
 public:
  RsWalker(const Tolerances& tol, Exec ex, RsResult& out) : tol_(tol), ex_(ex), out_(out) {}

  std::int64_t node(const Path& p, Range r) {
    if (const auto* e = std::get_if<ExpNode>(&p->v)) {
      const Mat ts = e->duration * e->s;
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (ts + ts.transpose()));
      if (es.eigenvalues().cwiseAbs().maxCoeff() < 2 * kPi) {
        note("exp closed form", r);
        return sym_signature(ts);
      }
    } else if (const auto* s = std::get_if<ShearNode>(&p->v)) {
      note("shear closed form", r);
      return sym_signature(s->b0) - sym_signature(s->b1);
    } else if (const auto* c = std::get_if<CatNode>(&p->v)) {
      const double k = static_cast<double>(c->parts.size());
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < c->parts.size(); ++i)
        sum += node(c->parts[i], r.sub(i / k, (i + 1) / k));
      return sum;
    }
    try {
      std::vector<CrossingReport> found;
      const std::int64_t v = detail::scan_crossings(symplectic_problem(p, tol_), tol_, ex_, found);
      for (auto& f : found) {
        f.t = r.map(f.t);
        out_.crossings.push_back(std::move(f));
      }
      return v;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedStructure && e.kind() != ErrorKind::IrregularCrossing)
        throw;
      if (const auto* c = std::get_if<ConjNode>(&p->v)) {
        note("conjugation: inner path", r);
        return node(c->psi, r);
      }
      if (const auto* d = std::get_if<DirectSumNode>(&p->v)) {
        note("direct sum: parts", r);
        std::int64_t sum = 0;
        for (const auto& q : d->parts) sum += node(q, r);
        return sum;
      }
      if (const auto* v = std::get_if<ReverseNode>(&p->v)) {
        note("reverse: inner path", r);
        return -node(v->inner, {r.b, r.a});
      }
      throw;
    }
  }

 private:
  void note(const std::string& what, Range r) {
    std::ostringstream os;
    os << what << " on [" << std::min(r.a, r.b) << ", " << std::max(r.a, r.b) << "]";
    out_.notes.push_back(os.str());
  }

  const Tolerances& tol_;
  Exec ex_;
  RsResult& out_;
};

}  // namespace

RsResult rs_index(const Path& p, const Tolerances& tol, Exec ex) {
  tol.validate();
  RsResult out;
  RsWalker w(tol, ex, out);
  out.value = HalfInt::from_doubled(w.node(p, {0.0, 1.0}));
  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const CrossingReport& a, const CrossingReport& b) { return a.t < b.t; });
  out.trace = detail::smin_trace(symplectic_problem(p, tol), ex, tol);
  return out;
}

std::string smin_csv(const std::vector<SminSample>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "t,smin,kernel_dim\n";
  for (const auto& s : trace) os << s.t << ',' << s.smin << ',' << s.kernel_dim << '\n';
  return os.str();
}

}  // namespace symp
