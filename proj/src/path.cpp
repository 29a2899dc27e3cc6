#include "symp/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "symp/core_linalg.hpp"

namespace symp {

namespace {

constexpr double kPi = 3.14159265358979323846;

Path make(int n, auto node) {
  auto p = std::make_shared<PathNode>();
  p->n = n;
  p->v = std::move(node);
  return p;
}

void need(bool ok, ErrorKind k, const std::string& msg) {
  if (!ok) throw Error(k, msg);
}

// Nearest Hamiltonian matrix: Omega0 X symmetric.
Mat hamiltonian_part(const Mat& x) {
  const Mat o = omega0(half_dim(x));
  const Mat ox = o * x;
  return -o * (0.5 * (ox + ox.transpose()));
}

// Cat bookkeeping: piece index and local parameter.
std::pair<int, double> cat_locate(int k, double t) {
  int i = static_cast<int>(std::floor(t * k));
  i = std::clamp(i, 0, k - 1);
  return {i, t * k - i};
}

double loop_a(double t) { return 1.0 + 4.0 * t * (1.0 - t) * 0.5; }
double loop_da(double t) { return 2.0 - 4.0 * t; }

double check_t(double t) {
  need(t >= -1e-12 && t <= 1.0 + 1e-12, ErrorKind::Contract,
       "path parameter outside [0,1]: " + std::to_string(t));
  return std::clamp(t, 0.0, 1.0);
}

}  // namespace

Path path_exp(const Mat& s, double duration) {
  const int n = half_dim(s);
  need((s - s.transpose()).norm() <= 1e-10 * std::max(1.0, s.norm()), ErrorKind::Contract,
       "exp node: S must be symmetric");
  need(std::isfinite(duration), ErrorKind::Contract, "exp node: T must be finite");
  return make(n, ExpNode{0.5 * (s + s.transpose()), duration});
}

Path path_sampled(std::vector<double> times, std::vector<Mat> mats, const Tolerances& tol) {
  need(times.size() >= 2 && times.size() == mats.size(), ErrorKind::Contract,
       "sampled node: need >= 2 times and one matrix per time");
  need(std::abs(times.front()) < 1e-12 && std::abs(times.back() - 1.0) < 1e-12,
       ErrorKind::Contract, "sampled node: times must run from 0 to 1");
  const int n = half_dim(mats[0]);
  SampledNode s;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    need(half_dim(mats[i]) == n, ErrorKind::Dimension, "sampled node: mixed dimensions");
    require_symplectic(mats[i], tol, "sampled node");
    if (i > 0)
      need(times[i] > times[i - 1], ErrorKind::Contract, "sampled node: times not increasing");
  }
  for (std::size_t i = 0; i + 1 < mats.size(); ++i) {
    const Mat step = symplectic_inverse(mats[i]) * mats[i + 1];
    const double dist = (step - Mat::Identity(2 * n, 2 * n)).norm();
    if (!(dist < 0.5))
      throw Error(ErrorKind::SamplingTooCoarse,
                  "sampled node: consecutive samples too far apart at t=" +
                      std::to_string(times[i]));
    Mat l = step.log();
    need(l.allFinite(), ErrorKind::SamplingTooCoarse, "sampled node: log failed");
    s.logs.push_back(hamiltonian_part(l));
  }
  s.times = std::move(times);
  s.mats = std::move(mats);
  return make(n, std::move(s));
}

Path path_constant(const Mat& a) { return path_sampled({0.0, 1.0}, {a, a}); }

Path path_cat(std::vector<Path> parts, const Tolerances& tol) {
  need(!parts.empty(), ErrorKind::Contract, "cat node: no parts");
  const int n = parts[0]->n;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    need(parts[i]->n == n, ErrorKind::Dimension, "cat node: mixed dimensions");
    if (i > 0) {
      const Mat a = evaluate(parts[i - 1], 1.0), b = evaluate(parts[i], 0.0);
      need((a - b).norm() <= 10.0 * tol.tol_symp * std::max(1.0, a.norm()), ErrorKind::Contract,
           "cat node: parts do not meet at junction " + std::to_string(i));
    }
  }
  return make(n, CatNode{std::move(parts)});
}

Path path_prod(Path left, Path right) {
  need(left->n == right->n, ErrorKind::Dimension, "prod node: mixed dimensions");
  const int n = left->n;
  return make(n, ProdNode{std::move(left), std::move(right)});
}

Path path_conj(Path phi, Path psi) {
  need(phi->n == psi->n, ErrorKind::Dimension, "conj node: mixed dimensions");
  const int n = phi->n;
  return make(n, ConjNode{std::move(phi), std::move(psi)});
}

Path path_dsum(std::vector<Path> parts) {
  need(!parts.empty(), ErrorKind::Contract, "dsum node: no parts");
  int n = 0;
  for (const auto& p : parts) n += p->n;
  return make(n, DirectSumNode{std::move(parts)});
}

Path path_reverse(Path inner) {
  const int n = inner->n;
  return make(n, ReverseNode{std::move(inner)});
}

Path make_shear(const Mat& b0, const Mat& b1) {
  need(b0.rows() == b0.cols() && b0.rows() >= 1 && b1.rows() == b0.rows() &&
           b1.cols() == b0.cols(),
       ErrorKind::Dimension, "shear node: B0 and B1 must be square of equal size");
  need((b0 - b0.transpose()).norm() <= 1e-10 * std::max(1.0, b0.norm()) &&
           (b1 - b1.transpose()).norm() <= 1e-10 * std::max(1.0, b1.norm()),
       ErrorKind::Contract, "shear node: B must be symmetric");
  return make(static_cast<int>(b0.rows()),
              ShearNode{0.5 * (b0 + b0.transpose()), 0.5 * (b1 + b1.transpose())});
}

Path make_loop(int wind, int n) {
  need(n >= 1, ErrorKind::Parameter, "make_loop: n must be >= 1");
  if (wind == 0) return path_constant(Mat::Identity(2 * n, 2 * n));
  return make(n, LoopNode{wind});
}

Path translate(Path p, const Mat& a) { return path_prod(std::move(p), path_constant(a)); }

Path sample_function(const std::function<Mat(double)>& f, int m, const Tolerances& tol) {
  need(m >= 1, ErrorKind::Parameter, "sample_function: m must be >= 1");
  std::vector<double> ts;
  std::vector<Mat> ms;
  for (int k = 0; k <= m; ++k) {
    ts.push_back(static_cast<double>(k) / m);
    ms.push_back(f(ts.back()));
  }
  ts.back() = 1.0;
  return path_sampled(std::move(ts), std::move(ms), tol);
}

Path resample(const Path& p, int m, const Tolerances& tol) {
  return sample_function([&](double t) { return evaluate(p, t); }, m, tol);
}

int path_dim(const Path& p) { return p->n; }

Mat evaluate(const Path& p, double t) {
  t = check_t(t);
  const int n = p->n;
  return std::visit(
      [&](const auto& nd) -> Mat {
        using T = std::decay_t<decltype(nd)>;
        if constexpr (std::is_same_v<T, ExpNode>) {
          return exp_hamiltonian(nd.s, t * nd.duration);
        } else if constexpr (std::is_same_v<T, SampledNode>) {
          const auto& ts = nd.times;
          std::size_t i = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
          i = std::clamp<std::size_t>(i, 1, ts.size() - 1) - 1;
          const double s = (t - ts[i]) / (ts[i + 1] - ts[i]);
          return nd.mats[i] * Mat((s * nd.logs[i]).exp());
        } else if constexpr (std::is_same_v<T, CatNode>) {
          const auto [i, s] = cat_locate(static_cast<int>(nd.parts.size()), t);
          return evaluate(nd.parts[i], s);
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          return evaluate(nd.left, t) * evaluate(nd.right, t);
        } else if constexpr (std::is_same_v<T, ConjNode>) {
          const Mat f = evaluate(nd.phi, t);
          return f * evaluate(nd.psi, t) * symplectic_inverse(f);
        } else if constexpr (std::is_same_v<T, DirectSumNode>) {
          std::vector<Mat> parts;
          for (const auto& q : nd.parts) parts.push_back(evaluate(q, t));
          return direct_sum_all(parts);
        } else if constexpr (std::is_same_v<T, ReverseNode>) {
          return evaluate(nd.inner, 1.0 - t);
        } else if constexpr (std::is_same_v<T, ShearNode>) {
          Mat m = Mat::Identity(2 * n, 2 * n);
          m.topRightCorner(n, n) = (1.0 - t) * nd.b0 + t * nd.b1;
          return m;
        } else {
          std::vector<Mat> parts{rotation(2.0 * kPi * nd.wind * t)};
          const double a = loop_a(t);
          for (int j = 1; j < n; ++j) {
            Mat d = Mat::Zero(2, 2);
            d(0, 0) = a;
            d(1, 1) = 1.0 / a;
            parts.push_back(d);
          }
          return direct_sum_all(parts);
        }
      },
      p->v);
}

Mat velocity(const Path& p, double t) {
  t = check_t(t);
  const int n = p->n;
  return std::visit(
      [&](const auto& nd) -> Mat {
        using T = std::decay_t<decltype(nd)>;
        if constexpr (std::is_same_v<T, ExpNode>) {
          return nd.duration * (j0(n) * nd.s);
        } else if constexpr (std::is_same_v<T, SampledNode>) {
          const auto& ts = nd.times;
          std::size_t i = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
          i = std::clamp<std::size_t>(i, 1, ts.size() - 1) - 1;
          const Mat& a = nd.mats[i];
          return a * nd.logs[i] * symplectic_inverse(a) / (ts[i + 1] - ts[i]);
        } else if constexpr (std::is_same_v<T, CatNode>) {
          const int k = static_cast<int>(nd.parts.size());
          const auto [i, s] = cat_locate(k, t);
          return k * velocity(nd.parts[i], s);
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          const Mat l = evaluate(nd.left, t);
          return velocity(nd.left, t) + l * velocity(nd.right, t) * symplectic_inverse(l);
        } else if constexpr (std::is_same_v<T, ConjNode>) {
          const Mat f = evaluate(nd.phi, t);
          const Mat c = f * evaluate(nd.psi, t) * symplectic_inverse(f);
          const Mat xf = velocity(nd.phi, t);
          return xf + f * velocity(nd.psi, t) * symplectic_inverse(f) -
                 c * xf * symplectic_inverse(c);
        } else if constexpr (std::is_same_v<T, DirectSumNode>) {
          std::vector<Mat> parts;
          for (const auto& q : nd.parts) parts.push_back(velocity(q, t));
          return direct_sum_all(parts);
        } else if constexpr (std::is_same_v<T, ReverseNode>) {
          return -velocity(nd.inner, 1.0 - t);
        } else if constexpr (std::is_same_v<T, ShearNode>) {
          Mat x = Mat::Zero(2 * n, 2 * n);
          x.topRightCorner(n, n) = nd.b1 - nd.b0;
          return x;
        } else {
          Mat r(2, 2);
          r << 0.0, -1.0, 1.0, 0.0;
          std::vector<Mat> parts{2.0 * kPi * nd.wind * r};
          const double g = loop_da(t) / loop_a(t);
          for (int j = 1; j < n; ++j) {
            Mat d = Mat::Zero(2, 2);
            d(0, 0) = g;
            d(1, 1) = -g;
            parts.push_back(d);
          }
          return direct_sum_all(parts);
        }
      },
      p->v);
}

bool is_junction(const Path& p, double t) {
  return std::visit(
      [&](const auto& nd) -> bool {
        using T = std::decay_t<decltype(nd)>;
        if constexpr (std::is_same_v<T, CatNode>) {
          const int k = static_cast<int>(nd.parts.size());
          const double x = t * k;
          const double r = std::round(x);
          if (std::abs(x - r) < 1e-12 && r > 0 && r < k) return true;
          const auto [i, s] = cat_locate(k, t);
          return is_junction(nd.parts[i], s);
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          return is_junction(nd.left, t) || is_junction(nd.right, t);
        } else if constexpr (std::is_same_v<T, ConjNode>) {
          return is_junction(nd.phi, t) || is_junction(nd.psi, t);
        } else if constexpr (std::is_same_v<T, DirectSumNode>) {
          for (const auto& q : nd.parts)
            if (is_junction(q, t)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, ReverseNode>) {
          return is_junction(nd.inner, 1.0 - t);
        } else if constexpr (std::is_same_v<T, SampledNode>) {
          for (std::size_t i = 1; i + 1 < nd.times.size(); ++i)
            if (std::abs(nd.times[i] - t) < 1e-12) return true;
          return false;
        } else {
          return false;
        }
      },
      p->v);
}

namespace {
GeneratorSample from_velocity(double t, const Mat& x, bool one_sided) {
  GeneratorSample g;
  g.t = t;
  const Mat s = -j0(half_dim(x)) * x;
  g.s = 0.5 * (s + s.transpose());
  g.one_sided = one_sided;
  return g;
}
}  // namespace

GeneratorSample generator(const Path& p, double t) {
  return from_velocity(t, velocity(p, t), is_junction(p, t));
}

GeneratorSample generator_fd(const Path& p, double t, double h) {
  t = check_t(t);
  auto d = [&](double hh) -> Mat {
    if (t - 2 * hh < 0)
      return (-3.0 * evaluate(p, t) + 4.0 * evaluate(p, t + hh) - evaluate(p, t + 2 * hh)) /
             (2 * hh);
    if (t + 2 * hh > 1)
      return (3.0 * evaluate(p, t) - 4.0 * evaluate(p, t - hh) + evaluate(p, t - 2 * hh)) /
             (2 * hh);
    return (evaluate(p, t + hh) - evaluate(p, t - hh)) / (2 * hh);
  };
  const Mat deriv = (4.0 * d(0.5 * h) - d(h)) / 3.0;
  return from_velocity(t, deriv * symplectic_inverse(evaluate(p, t)), is_junction(p, t));
}

}  // namespace symp
