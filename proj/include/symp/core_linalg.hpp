#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symp/types.hpp"

namespace symp {

// Omega0 = [[0, I], [-I, 0]] and J0 = [[0, -I], [I, 0]] in the basis e1..en, f1..fn.
Mat omega0(int n);
Mat j0(int n);

// Half dimension of a 2n x 2n matrix; throws Dimension on odd or non-square input.
int half_dim(const Mat& m);

double symplectic_residual(const Mat& m);
bool is_symplectic(const Mat& m, const Tolerances& tol = {});
void require_symplectic(const Mat& m, const Tolerances& tol, const char* where);

struct Polar {
  Mat O;  // orthogonal and symplectic
  Mat P;  // symmetric positive definite and symplectic
};
Polar polar_decompose(const Mat& a, const Tolerances& tol = {});

// det(B + iC) for O = [[B, -C], [C, B]].
cplx complex_det(const Mat& o, const Tolerances& tol = {});

cplx rho_polar(const Mat& a, const Tolerances& tol = {});
cplx rho_hat(const Mat& a, const Tolerances& tol = {});

// The interleaved symplectic direct sum.
Mat direct_sum(const Mat& a1, const Mat& a2);
// Same interleaving for an arbitrary list of even-sized blocks.
Mat direct_sum_all(const std::vector<Mat>& parts);

Mat random_symplectic(int n, std::uint64_t seed, double scale = 0.5);
Mat random_symmetric(int dim, std::uint64_t seed, double scale = 1.0);

// Small helpers shared across modules.
Mat rotation(double phi);                    // 2x2 R(phi)
Mat exp_hamiltonian(const Mat& s, double t = 1.0);  // exp(t J0 S)
Mat symplectic_inverse(const Mat& a);        // -Omega0 A^T Omega0
int signature(const Mat& sym, double zero_tol);
double min_singular_value(const Mat& m);
cplx normalize_unit(cplx z);

// Normal-form endpoints of the two components of Sp*: W+ = -Id, W- = diag(2,-1,..,1/2,-1,..).
Mat w_plus(int n);
Mat w_minus(int n);
// Symmetric S- with exp(pi J0 S-) = W-.
Mat s_minus(int n);

}  // namespace symp
