#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "symp/types.hpp"

namespace symp {

struct PathNode;
using Path = std::shared_ptr<const PathNode>;

struct ExpNode {
  Mat s;
  double duration = 1.0;
};
struct SampledNode {
  std::vector<double> times;
  std::vector<Mat> mats;
  std::vector<Mat> logs;  // log(A_i^-1 A_{i+1}), precomputed
};
struct CatNode {
  std::vector<Path> parts;  // part i runs over [i/k, (i+1)/k]
};
struct ProdNode {
  Path left, right;
};
struct ConjNode {
  Path phi, psi;  // phi psi phi^-1
};
struct DirectSumNode {
  std::vector<Path> parts;
};
struct ReverseNode {
  Path inner;
};
struct ShearNode {
  Mat b0, b1;  // [[I, B(t)], [0, I]], B affine
};
struct LoopNode {
  int wind = 0;
};

struct PathNode {
  int n = 0;
  std::variant<ExpNode, SampledNode, CatNode, ProdNode, ConjNode, DirectSumNode, ReverseNode,
               ShearNode, LoopNode>
      v;
};

// Constructors; all validate dimensions and throw Dimension / Contract / SamplingTooCoarse.
Path path_exp(const Mat& s, double duration = 1.0);
Path path_sampled(std::vector<double> times, std::vector<Mat> mats, const Tolerances& tol = {});
Path path_constant(const Mat& a);
Path path_cat(std::vector<Path> parts, const Tolerances& tol = {});
Path path_prod(Path left, Path right);
Path path_conj(Path phi, Path psi);
Path path_dsum(std::vector<Path> parts);
Path path_reverse(Path inner);
Path make_shear(const Mat& b0, const Mat& b1);
Path make_loop(int wind, int n);

// t -> p(t) a
Path translate(Path p, const Mat& a);
// Sampled path through f(k/m), k = 0..m
Path sample_function(const std::function<Mat(double)>& f, int m, const Tolerances& tol = {});
Path resample(const Path& p, int m, const Tolerances& tol = {});

int path_dim(const Path& p);
Mat evaluate(const Path& p, double t);
// psi'(t) psi(t)^-1, exact per node; at Cat junctions the right-hand piece is used.
Mat velocity(const Path& p, double t);

struct GeneratorSample {
  double t = 0;
  Mat s;                   // S_t with psi' = J0 S_t psi
  bool one_sided = false;  // t sits on a Cat junction
};
GeneratorSample generator(const Path& p, double t);
// Central differences with one Richardson level; one-sided at 0 and 1.
GeneratorSample generator_fd(const Path& p, double t, double h = 1e-5);

// True if t is a Cat junction of the top-level catenation.
bool is_junction(const Path& p, double t);

}  // namespace symp
