#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symp/types.hpp"

namespace symp {

enum class BlockCase { OffCircleReal, OffCircleComplex, PlusMinusOne, UnitNonRealEven, UnitNonRealOdd };
const char* block_case_name(BlockCase c);

struct NormalFormBlock {
  BlockCase kind = BlockCase::PlusMinusOne;
  int jordan_order = 1;  // p+1, r_j or s_j
  double lambda = 1.0;   // OffCircleReal eigenvalue, or +-1
  double r = 1.0;        // OffCircleComplex modulus
  double phi = 0.0;      // OffCircleComplex argument, unit-circle angle in (0, pi)
  int d = 0;             // PlusMinusOne: d in {-1,0,1}; unit cases: sign of the top chain form

  int size() const;      // real dimension of the block
};

struct NormalFormReport {
  std::vector<NormalFormBlock> blocks;
  Mat basis;             // symplectic K with K^-1 A K = assemble(blocks)
  double residual = 0;   // ||K^-1 A K - assemble(blocks)||_F
};

class NormalFormError : public Error {
 public:
  NormalFormError(const std::string& what, NormalFormReport best)
      : Error(ErrorKind::IllConditioned, what), best_(std::move(best)) {}
  const NormalFormReport& best() const { return best_; }

 private:
  NormalFormReport best_;
};

// Real Jordan pieces.
Mat jordan_block(double lambda, int m);
Mat jordan_real_block(double r, double phi, int m);  // 2m x 2m, R(re^{i phi}) on the diagonal

// Symplectic 2k x 2k matrix realizing one block; throws Parameter on invalid input.
Mat block_matrix(const NormalFormBlock& b);
Mat assemble(const std::vector<NormalFormBlock>& blocks);

NormalFormReport normal_form(const Mat& a, const Tolerances& tol = {});

struct BlockInvariant {
  int kind;
  int order;
  double p1;  // lambda, r or phi (quantized)
  double p2;  // phi for OffCircleComplex, else 0
  int d;
  auto operator<=>(const BlockInvariant&) const = default;
};
// Sorted, quantized to 1e-4 so equal forms compare equal.
std::vector<BlockInvariant> invariants_of(const NormalFormReport& report);

// A' = A S with S built blockwise in the normal-form basis; A' has 2n distinct eigenvalues.
Mat semisimple_perturb(const Mat& a, double eps, std::uint64_t seed, const Tolerances& tol = {});

}  // namespace symp
