#pragma once

#include <vector>

#include "symp/types.hpp"

namespace symp {

enum class Regime { UnitNonReal, PlusOne, MinusOne, RealPositive, RealNegative, OffCircleComplex };
const char* regime_name(Regime r);

// One cluster of numerically equal eigenvalues.
struct Cluster {
  cplx center;              // snapped to S^1 or R when the regime says so
  std::vector<cplx> raw;    // solver output assigned to this cluster
  Regime regime = Regime::OffCircleComplex;
  int mult() const { return static_cast<int>(raw.size()); }
  // Krein counts, only for UnitNonReal clusters.
  int krein_pos = 0;
  int krein_neg = 0;
};

struct SpectralAnalysis {
  int n = 0;
  std::vector<Cluster> clusters;
  int ambiguous_merges = 0;  // cluster pairs merged at distance in (tol_eig, 10 tol_eig]
};

// strict: a gap in (tol_eig, 10 tol_eig] raises IllConditioned; otherwise the two are merged.
// with_krein: fill krein counts of unit clusters.
SpectralAnalysis analyze_spectrum(const Mat& a, const Tolerances& tol, bool strict,
                                  bool with_krein = true);

struct EigenQuadruple {
  cplx representative;
  std::vector<cplx> members;  // distinct members of {l, 1/l, conj l, 1/conj l}
  Regime regime;
  int alg_multiplicity;       // per member
};

std::vector<EigenQuadruple> eigen_quadruples(const Mat& a, const Tolerances& tol = {});

// Orthonormal complex basis of the generalized eigenspace of lambda.
CMat generalized_eigenspace(const Mat& a, cplx lambda, const Tolerances& tol = {});
// dim Ker (A - lambda)^power, by singular values below tol_kernel (scaled).
int kernel_dimension(const Mat& a, cplx lambda, int power, const Tolerances& tol = {});

struct KreinData {
  cplx lambda;
  CMat q_matrix;  // Hermitian matrix of the Krein form on the generalized eigenspace
  int m_plus = 0;
  int m_minus = 0;
};

KreinData krein_form(const Mat& a, cplx lambda, const Tolerances& tol = {});

std::vector<cplx> first_kind_eigenvalues(const Mat& a, const Tolerances& tol = {});

// Both product formulas are evaluated and required to agree.
cplx rho(const Mat& a, const Tolerances& tol = {});
cplx rho_from_analysis(const SpectralAnalysis& sa);

}  // namespace symp
