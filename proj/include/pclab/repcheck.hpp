#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "pclab/fp_matrix.hpp"
#include "pclab/group.hpp"

namespace pclab {

// F_p-linear representation of a group, stored on generators and extended
// multiplicatively (with a per-element cache) on demand.
class FpMatrixRep {
public:
  FpMatrixRep(GroupPtr group, std::uint32_t p, std::vector<fp::Matrix> generatorMatrices);

  const GroupPtr& group() const { return group_; }
  std::uint32_t prime() const { return p_; }
  std::uint32_t dimension() const { return dim_; }
  const std::vector<fp::Matrix>& generatorMatrices() const { return gen_; }

  const fp::Matrix& matrixOf(Elt x) const;
  std::vector<Elt> kernelMembers() const;

  // phi(g*x) == phi(g)*phi(x) for every generator g and element x.
  bool respectsMultiplication() const;

private:
  GroupPtr group_;
  std::uint32_t p_;
  std::uint32_t dim_;
  std::vector<fp::Matrix> gen_;
  mutable std::unordered_map<Elt, fp::Matrix> cache_;
  mutable std::mutex cacheMutex_;
};

// Direct sum of the conjugation actions of G on the lambda^(1) layers of a
// normal p-subgroup Omega, as block-diagonal matrices over F_p.
FpMatrixRep conjugationModule(GroupPtr g, const Subgroup& omega, std::uint32_t p);

// Jordan block sizes of a unipotent matrix with A^p = I, from the ranks of
// (A - I)^j: #blocks of size s = r_{s-1} - 2 r_s + r_{s+1}. Throws
// NotUnipotentOrderP when A^p != I. Result is sorted ascending.
std::vector<std::size_t> jordanBlockSizes(const fp::Matrix& a, std::uint32_t p);

struct LemmaCritResult {
  enum class Status { NormalSylowPredicted, HypothesisIFailed, HypothesisIIFailed };
  Status status;
  bool kernelEqualsSylow = false;
  bool sylowNormal = false;
  std::optional<Elt> witness;
};

// Nilpotency-degree criterion: if kernel(phi) <= O_p(G) and
// (phi(g) - I)^(p-2) = 0 for all g in a Sylow p-subgroup P, then P =
// kernel(phi) and P is normal. Positive outcomes are re-verified
// group-theoretically. Requires p odd.
LemmaCritResult lemmaCritCheck(GroupPtr g, std::uint32_t p, const FpMatrixRep& rep);

// (A - I)^(p-2) = 0 iff all Jordan blocks have size <= p-2; both routes.
bool nilpotencyDegreeAtMost(const fp::Matrix& a, std::uint32_t power);

// Matrix fixture file format: {"dimension": d, "prime": p, "rows": [[...]]}.
fp::Matrix loadMatrixFixture(const std::string& path);
void saveMatrixFixture(const std::string& path, const fp::Matrix& m);

// Exhaustive irreducibility check of the module (every nonzero vector
// generates). Intended for small dimensions (p^dim vectors).
bool moduleIsIrreducible(const FpMatrixRep& rep);

// Direct sum of two representations of the same group.
FpMatrixRep directSumRep(const FpMatrixRep& a, const FpMatrixRep& b);
FpMatrixRep trivialRep(GroupPtr g, std::uint32_t p, std::uint32_t dim);

// Frobenius-twist module fixture: G = C_q x| C_p acting on F_{p^d} (d the
// order of p mod q) with C_q as multiplication by an order-q unit and C_p as
// a Frobenius power. The module is irreducible by construction (and checked).
struct FrobeniusModuleFixture {
  GroupPtr group;  // C_q x| C_p
  FpMatrixRep rep;
  std::uint32_t twist;  // k with c x c^-1 = x^k
};
FrobeniusModuleFixture frobeniusModuleFixture(std::uint32_t p, std::uint32_t q,
                                              std::uint32_t frobPower, std::uint64_t maxOrder);

}  // namespace pclab
