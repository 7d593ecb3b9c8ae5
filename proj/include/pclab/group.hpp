#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pclab {

// Element of a group, identified by its position in the parent group's
// canonical enumeration. Index 0 is always the identity.
using Elt = std::uint32_t;
inline constexpr Elt kIdentity = 0;
inline constexpr Elt kNoElt = 0xFFFFFFFFu;

enum class ErrorCode {
  SizeCapExceeded,
  MalformedExpr,
  NotNormal,
  InvalidAction,
  IncompatibleCodomain,
  InvalidHeight,
  NotAPGroup,
  OddPrimeRequired,
  CapExceeded,
  HypothesisFailed,
  NotUnipotentOrderP,
  InvalidPrimes,
  InvalidArgument,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

const char* errorCodeName(ErrorCode code);

enum class Backend : std::uint8_t {
  Permutation = 0,
  MatrixModPn = 1,
  TupleProduct = 2,
  CosetQuotient = 3,
  SubgroupOfParent = 4,
};

// Element representation used while enumerating a group. Interpretation is
// backend-specific (matrix entries, permutation images, component indices).
using Payload = std::vector<std::uint32_t>;

// Multiplication oracle driving breadth-first closure enumeration.
// Only construction needs it; a finished Group multiplies through its tables.
class MultOracle {
public:
  virtual ~MultOracle() = default;
  virtual Payload identity() const = 0;
  virtual Payload multiply(const Payload& a, const Payload& b) const = 0;
  virtual Backend backend() const = 0;
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A fully enumerated finite group. Immutable after construction; safe for
// concurrent reads. Elements are indices assigned by deterministic
// breadth-first generator closure (generators in declaration order, left
// multiplication), so identical construction expressions replay to identical
// index assignments.
class Group : public std::enable_shared_from_this<Group> {
public:
  // BFS enumeration from generator payloads. Throws SizeCapExceeded if the
  // closure passes maxOrder.
  static GroupPtr enumerate(const MultOracle& oracle, const std::vector<Payload>& generatorPayloads,
                            std::uint64_t maxOrder, bool keepPayloads, std::string description);

  // Assemble a group from complete left-multiplication tables on a fixed
  // element indexing (used for quotients). Word structure is derived by BFS
  // over the table graph.
  static GroupPtr fromTables(std::vector<std::vector<Elt>> leftTables, std::vector<Elt> generators,
                             Backend backend, std::string description,
                             std::vector<Payload> payloads = {});

  std::uint32_t order() const { return order_; }
  Backend backend() const { return backend_; }
  const std::string& description() const { return description_; }
  const std::vector<Elt>& generators() const { return generators_; }

  Elt mult(Elt a, Elt b) const;
  Elt inverse(Elt a) const { return inverse_[a]; }
  Elt conjugate(Elt g, Elt x) const { return mult(mult(g, x), inverse_[g]); }
  // [a, b] = a^-1 b^-1 a b
  Elt commutatorElt(Elt a, Elt b) const { return mult(mult(inverse_[a], inverse_[b]), mult(a, b)); }
  Elt power(Elt x, std::int64_t e) const;

  std::uint32_t elementOrder(Elt x) const;
  // Per-element order table, computed once on first use.
  const std::vector<std::uint32_t>& elementOrders() const;
  std::uint64_t exponent() const;
  bool isPGroup(std::uint32_t p) const;

  // Word of x in the generators, as generator ordinals (outermost first):
  // x = g[w0] * g[w1] * ... * g[wk].
  std::vector<std::uint16_t> wordOf(Elt x) const;
  std::string describeElement(Elt x) const;

  bool hasPayloads() const { return !payloads_.empty(); }
  const std::vector<Payload>& payloads() const;

  std::span<const Elt> leftTable(std::size_t genOrdinal) const { return leftTables_[genOrdinal]; }
  Elt parentOf(Elt x) const { return parent_[x]; }
  std::uint16_t genOrdinalOf(Elt x) const { return genOrd_[x]; }

  // Prime factorization of the group order.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& orderFactorization() const;
  std::uint32_t pPart(std::uint32_t p) const;

private:
  Group() = default;
  void finalize();  // computes generator inverses and the inverse table

  std::uint32_t order_ = 1;
  Backend backend_ = Backend::Permutation;
  std::string description_;
  std::vector<Elt> generators_;
  std::vector<std::vector<Elt>> leftTables_;  // leftTables_[i][x] = gens[i] * x
  std::vector<Elt> parent_;
  std::vector<std::uint16_t> genOrd_;
  std::vector<Elt> genInverse_;  // inverse of each generator
  std::vector<Elt> inverse_;
  std::vector<Payload> payloads_;
  std::vector<Elt> bfsOrder_;  // discovery order (== identity..n-1 for enumerate())

  mutable std::once_flag ordersOnce_;
  mutable std::vector<std::uint32_t> orders_;
  mutable std::once_flag factorOnce_;
  mutable std::vector<std::pair<std::uint32_t, std::uint32_t>> factors_;
};

// A subgroup of a parent group, stored as a sorted index set plus generators.
// Construction asserts Lagrange's theorem and membership of the identity.
class Subgroup {
public:
  Subgroup(GroupPtr parent, std::vector<Elt> sortedMembers, std::vector<Elt> generators);

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Elt>& members() const { return members_; }
  const std::vector<Elt>& generators() const { return generators_; }
  std::uint32_t order() const { return static_cast<std::uint32_t>(members_.size()); }
  bool contains(Elt x) const;
  bool isWhole() const { return order() == parent_->order(); }
  bool isTrivial() const { return order() == 1; }
  bool isNormal() const;  // cached
  bool isPGroupSubgroup(std::uint32_t p) const;
  bool isAbelian() const;
  std::uint64_t exponentOfSubgroup() const;
  bool sameAs(const Subgroup& o) const { return members_ == o.members_; }
  bool containsSubgroup(const Subgroup& o) const;

private:
  GroupPtr parent_;
  std::vector<Elt> members_;
  std::vector<Elt> generators_;
  mutable std::optional<bool> normal_;
  mutable std::mutex cacheMutex_;
};

// Total homomorphism between enumerated groups, stored as the full image map.
struct Homomorphism {
  GroupPtr source;
  GroupPtr target;
  std::vector<Elt> image;

  Elt operator()(Elt x) const { return image[x]; }
  bool isSurjective() const;
  bool isInjective() const;
  std::vector<Elt> kernelMembers() const;

  // Builds the homomorphism determined by generator images and verifies the
  // defining property phi(g*x) = phi(g)*phi(x) for every generator g and
  // element x (this check is exhaustive in effect: it forces phi to be
  // multiplicative on all pairs). Throws InvalidAction if inconsistent.
  static Homomorphism fromGeneratorImages(GroupPtr source, GroupPtr target, const std::vector<Elt>& genImages);
};

// Incremental subgroup closure: members are grown by BFS as generators are
// added; each (generator, member) pair is multiplied exactly once.
class ClosureBuilder {
public:
  explicit ClosureBuilder(GroupPtr g, std::uint64_t sizeCap = 0);

  // Adds a generator (no-op if already contained). Returns false if the
  // closure exceeded the size cap (state is then unusable).
  bool addGenerator(Elt g);
  bool addAll(std::span<const Elt> gens);
  bool contains(Elt x) const { return marks_[x] != 0; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Elt>& membersUnsorted() const { return members_; }
  const std::vector<Elt>& generatorsUsed() const { return gens_; }
  Subgroup build() const;  // sorts members

private:
  bool process();
  GroupPtr g_;
  std::uint64_t cap_;
  std::vector<std::uint8_t> marks_;
  std::vector<Elt> members_;
  std::vector<Elt> gens_;
  std::vector<std::size_t> processed_;  // per-gen pointer into members_
};

// --- basic subgroup machinery -------------------------------------------

Subgroup trivialSubgroup(GroupPtr g);
Subgroup wholeSubgroup(GroupPtr g);

// Smallest subgroup containing the seed.
Subgroup closure(GroupPtr g, std::span<const Elt> seed);
// Smallest normal subgroup of g containing the seed.
Subgroup normalClosure(GroupPtr g, std::span<const Elt> seed);
// Subgroup generated by commutators [n, m]; computed from generator-pair
// commutators saturated by conjugation inside <N, M>.
Subgroup commutator(GroupPtr g, const Subgroup& n, const Subgroup& m);
// [N, G, G, ..., G] with k copies of G (k = 0 gives N).
Subgroup iteratedCommutator(GroupPtr g, const Subgroup& n, std::uint32_t k);

Subgroup centralizer(GroupPtr g, const Subgroup& s);
Subgroup normalizer(GroupPtr g, const Subgroup& s);
Subgroup center(GroupPtr g);
Subgroup derivedSubgroup(GroupPtr g);

Subgroup subgroupJoin(GroupPtr g, const Subgroup& a, const Subgroup& b);
Subgroup subgroupIntersect(const Subgroup& a, const Subgroup& b);
Subgroup conjugateSubgroup(GroupPtr g, Elt c, const Subgroup& s);
// Reconstructs generators for a member set (greedy minimal-index extraction).
std::vector<Elt> extractGenerators(GroupPtr g, const std::vector<Elt>& sortedMembers);
Subgroup subgroupFromMembers(GroupPtr g, std::vector<Elt> sortedMembers);

// Quotient by a normal subgroup. Cosets are indexed by their minimal member
// index; the returned homomorphism is the projection. Throws NotNormal.
std::pair<GroupPtr, Homomorphism> quotient(GroupPtr g, const Subgroup& n);

Subgroup preimage(const Homomorphism& phi, const Subgroup& ofTarget);
Subgroup image(const Homomorphism& phi, const Subgroup& ofSource);

// A subgroup re-enumerated as a standalone Group, with the index map back
// into the parent.
struct EmbeddedGroup {
  GroupPtr group;
  std::vector<Elt> toParent;              // new index -> parent index
  Elt fromParent(Elt parentIdx) const;    // parent index -> new index (linear scanless map)
  std::vector<Elt> fromParentMap;         // parent index -> new index or kNoElt
};
EmbeddedGroup asStandaloneGroup(GroupPtr g, const Subgroup& s);

// --- products -------------------------------------------------------------

GroupPtr dirProd(GroupPtr a, GroupPtr b, std::uint64_t maxOrder);
// K x| H. actionOnKGenerators[i] is the automorphism of K attached to the
// i-th generator of H, given as images of ALL K elements (full table).
GroupPtr semidirect(GroupPtr k, GroupPtr h, const std::vector<std::vector<Elt>>& actionOfHGenerators,
                    std::uint64_t maxOrder);
// Convenience: H cyclic-generated action given as automorphism tables built
// from generator images on K.
std::vector<Elt> automorphismFromGenImages(GroupPtr k, const std::vector<Elt>& genImages);
GroupPtr wreathRegular(GroupPtr a, GroupPtr b, std::uint64_t maxOrder);
// Fiber product {(x, y) : f(x) = g(y)} of X --f--> C <--g-- Y, materialized
// as a standalone group. Throws IncompatibleCodomain unless the two
// homomorphisms share a target instance.
GroupPtr pullback(const Homomorphism& f, const Homomorphism& g, std::uint64_t maxOrder);

GroupPtr cyclicGroup(std::uint32_t n);
GroupPtr elementaryAbelian(std::uint32_t p, std::uint32_t rank);
GroupPtr abelianGroup(const std::vector<std::uint32_t>& cyclicOrders, std::uint64_t maxOrder);
GroupPtr permutationGroup(const std::vector<std::vector<std::uint32_t>>& genImages, std::uint64_t maxOrder);

// --- diagnostics ----------------------------------------------------------

// Verifies identity/inverse laws exhaustively and associativity exhaustively
// for order <= 100, on 1e5 seeded triples otherwise; also checks that the
// generator closure spans the full element set.
bool groupSelfCheck(const GroupPtr& g, std::uint64_t seed = 0);

struct IsoResult {
  enum class Verdict { Yes, No, Inconclusive } verdict;
  std::optional<Homomorphism> witness;
};

// Isomorphism test: invariant prescreen, then backtracking over generator
// images. `budget` caps the number of search nodes.
IsoResult isIsomorphic(GroupPtr p, GroupPtr q, std::uint64_t budget = 200000);

}  // namespace pclab
