#pragma once

#include <optional>
#include <unordered_map>

#include "pclab/fp_matrix.hpp"
#include "pclab/group.hpp"

namespace pclab {

// An ordered chain of subgroups tagged with its kind. Terms are stored for
// every index (with repeats) up to stabilization, so series-index arithmetic
// can address term n directly.
struct SubgroupSeries {
  enum class Kind { Omega, AgemoTower, Zeta, Lambda, M, Custom };

  Kind kind = Kind::Custom;
  GroupPtr parent;
  std::vector<Subgroup> terms;
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  int firstIndex = 0;

  int lastIndex() const { return firstIndex + static_cast<int>(terms.size()) - 1; }
  // Clamped access: indices below the first term yield the series' low
  // sentinel (parent for lambda, trivial for the ascending kinds), indices
  // beyond the last stored term yield the stable final term.
  Subgroup termAt(int n) const;
};

const char* seriesKindName(SubgroupSeries::Kind k);

// Omega_i(G, p): subgroup generated by all elements of order dividing p^i.
Subgroup omega(GroupPtr g, std::uint32_t p, std::uint32_t i);
// Ascending chain Omega_0, Omega_1, ... up to stabilization.
SubgroupSeries omegaSeries(GroupPtr g, std::uint32_t p);

struct OmegaExactness {
  bool equal;
  std::optional<Elt> witness;  // member of Omega_j of order > p^j when strict
};
// Compares the generated subgroup Omega_j with the raw solution set of
// x^(p^j) = 1.
OmegaExactness omegaExactSet(GroupPtr g, std::uint32_t p, std::uint32_t j);

// Agemo G^(p^j): closure of the p^j-th powers.
Subgroup agemo(GroupPtr g, std::uint32_t p, std::uint32_t j);
Subgroup agemoOfSubgroup(GroupPtr g, const Subgroup& s, std::uint32_t p, std::uint32_t j = 1);
SubgroupSeries agemoTower(GroupPtr g, std::uint32_t p);

// True iff the set {x^p : x in G} already equals the subgroup G^p.
bool isPowerSurjective(GroupPtr g, std::uint32_t p);

// N^(1/p): normal subgroup generated by {x : x^p in N}. Throws NotNormal.
Subgroup pthRoot(GroupPtr g, const Subgroup& n, std::uint32_t p);

// Ascending central series zeta_0 = 1, zeta_{k+1}/zeta_k = Z(G/zeta_k),
// stored up to the hypercenter.
SubgroupSeries zetaSeries(GroupPtr g);

// Lower central series gamma_1 = G, gamma_{i+1} = [gamma_i, G].
SubgroupSeries lowerCentralSeries(GroupPtr g);
std::optional<std::uint32_t> nilpotencyClass(GroupPtr g);

// lambda_n^(k): lambda_n = P for n <= 1, and for n > 1 the closure of
// lambda_{n-k}^p * [lambda_{n-1}, P], indices <= 1 reading as P.
// Requires 1 <= k <= p-1 (InvalidHeight otherwise).
SubgroupSeries lambdaSeries(GroupPtr g, std::uint32_t p, std::uint32_t k);

// Index of the last nonzero lambda^(k) layer. Requires a p-group.
std::uint32_t kElementaryPLength(GroupPtr g, std::uint32_t p, std::uint32_t k);

// M_n(P) = [Omega_1(P), P, ..., P] (p-n-1 copies) for n <= p-1, and
// M_{n-p+1}(P)^(1/p) above; M_n = 1 for n < 0. Requires an odd prime and a
// p-group.
SubgroupSeries mSeries(GroupPtr g, std::uint32_t p);

// One elementary abelian layer upper/lower with a chosen coset-representative
// basis (greedy by minimal element index) and coordinates for every member of
// the upper term.
struct FpLayer {
  std::uint32_t dim = 0;
  std::vector<Elt> basis;
  std::unordered_map<Elt, std::vector<std::uint8_t>> coords;
  const std::vector<std::uint8_t>& coordsOf(Elt x) const;
};
FpLayer buildLayer(GroupPtr g, const Subgroup& upper, const Subgroup& lower, std::uint32_t p);

// Bilinear bracket data between two layers, flattened row-major over
// (i, j) basis pairs of the source layers.
struct LayerBracket {
  int n = 0, m = 0;
  fp::Matrix flat;  // (dim_n * dim_m) x dim_target
};

// Graded F_p object of a series: per-layer F_p spaces with the induced
// power map t (degree shift) and, for lambda, the commutator bracket.
struct GradedFpObject {
  GroupPtr parent;
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  int degreeShift = 0;
  int firstIndex = 0;
  // Series index of the upper term of layer n: n + upperIndexOffset
  // (0 for lambda_n/lambda_{n+1}, 1 for M_{n+1}/M_n).
  int upperIndexOffset = 0;
  std::vector<FpLayer> layers;
  std::vector<fp::Matrix> tMaps;  // tMaps[i]: layer i -> layer i + degreeShift (dim_target x dim_source)
  std::vector<LayerBracket> brackets;

  int indexOfLayer(std::size_t i) const { return firstIndex + static_cast<int>(i); }
  std::uint32_t layerDim(int seriesIndex) const;
  std::size_t totalDim() const;
};

// Graded object of the lambda^(k) series; requires k <= p-2.
// alternateRepSeed != 0 re-derives with randomized coset representatives
// (used by well-definedness checks).
GradedFpObject lambdaGraded(GroupPtr g, std::uint32_t p, std::uint32_t k, std::uint64_t alternateRepSeed = 0);

// True iff every t-map of the lambda^(k) graded object is surjective onto
// layer n+k; requires k <= p-2.
bool isKPowerful(GroupPtr g, std::uint32_t p, std::uint32_t k);

// Graded object of the M-series with the degree-(1-p) power map. Verifies the
// additive p-power congruence on sampled pairs and throws HypothesisFailed on
// violation. Exposes Ann(t) and t-image data through the matrices.
GradedFpObject mGraded(GroupPtr g, std::uint32_t p, std::uint64_t sampleSeed = 42);

// Per-layer basis of ker(t) as row matrices.
std::vector<fp::Matrix> gradedAnnihilator(const GradedFpObject& m);
// Per-layer span of {coords of q mod lower : q in Q intersect upper}.
std::vector<fp::Matrix> gradedSubspaceOf(const GradedFpObject& m, const SubgroupSeries& series,
                                         const Subgroup& q);

// Omega_i(G, p) <= zeta_k(G), reading zeta_k as the hypercenter when the
// series is shorter than k.
bool isPiCentralOfHeight(GroupPtr g, std::uint32_t p, std::uint32_t i, std::uint32_t k);

}  // namespace pclab
