#pragma once

#include <map>
#include <optional>
#include <set>

#include "pclab/group.hpp"

namespace pclab {

// Elementary abelian subgroup enumeration, the Quillen category, and the
// fusion-control predicates.

// All elementary abelian p-subgroups of G (including the trivial subgroup),
// enumerated by extending independent commuting order-p elements. Throws
// CapExceeded past `cap` subgroups. `within` restricts members to a subgroup.
std::vector<Subgroup> elementaryAbelianSubgroups(GroupPtr g, std::uint32_t p, std::size_t cap,
                                                 const Subgroup* within = nullptr);

// All subgroups of a p-group, by cyclic extension through normalizers.
// Throws CapExceeded past the cap.
std::vector<Subgroup> allSubgroupsOfPGroup(GroupPtr g, std::uint32_t p, std::size_t cap);

// All normal subgroups: join closure of the elementwise normal closures.
// Throws CapExceeded past the cap.
std::vector<Subgroup> allNormalSubgroups(GroupPtr g, std::size_t cap);

// A morphism E -> E' of the Quillen category, stored as the images of E's
// canonical generator list under some conjugation i_g.
using ConjMap = std::vector<Elt>;

struct QuillenCategory {
  GroupPtr group;
  std::uint32_t p = 0;
  std::vector<Subgroup> objects;  // elementary abelian p-subgroups, trivial first
  // morphisms[{i, j}] = distinct conjugation-induced maps object i -> object j
  std::map<std::pair<std::size_t, std::size_t>, std::set<ConjMap>> morphisms;

  std::size_t morphismCount() const;
};

QuillenCategory quillenCategory(GroupPtr g, std::uint32_t p, std::size_t cap = 20000);

// Morphism set between two elementary abelian subgroups with conjugators
// restricted to `conjugators` (member list of a subgroup of g).
std::set<ConjMap> morphismsBetween(GroupPtr g, const Subgroup& e, const Subgroup& ePrime,
                                   const std::vector<Elt>& conjugators);

// j_{H,G} equivalence check: every object of C_G is G-conjugate into H and
// mor_H(E, E') = mor_G(E, E') for all objects of C_H. H must contain a Sylow
// p-subgroup of G.
bool controlsElementaryAbelianFusion(const Subgroup& h, GroupPtr g, std::uint32_t p,
                                     std::size_t cap = 20000);

enum class FusionLevel { Elements, Cyclic, AllSubgroupsUnderCap };
const char* fusionLevelName(FusionLevel level);

struct FusionVerdict {
  bool controls = true;
  FusionLevel level = FusionLevel::Cyclic;
  // counterexample: Q <= P and g with gQg^-1 <= P but g not in C_G(Q).N
  std::optional<std::vector<Elt>> witnessQGens;
  std::optional<Elt> witnessConjugator;
};

// Does N control p-fusion in G at the requested level: for Q <= P (P a Sylow
// p-subgroup chosen inside N) and g in G with gQg^-1 <= P, g must lie in
// C_G(Q).N. Negative searches scan cyclic Q first; the first witness (lowest
// indices) wins deterministically.
FusionVerdict controlsPFusion(const Subgroup& n, GroupPtr g, std::uint32_t p, FusionLevel level,
                              std::size_t cap = 20000);

// Independent re-verification of a negative witness by exhaustive scan of
// C_G(Q).N.
bool verifyFusionWitness(const Subgroup& n, GroupPtr g, const std::vector<Elt>& qGens, Elt conjugator);

// G = P.Cent_G(E) for every elementary abelian E <= G, checked by order
// arithmetic |P| * |C| / |P meet C| == |G|.
bool propFungrCheck(GroupPtr g, std::uint32_t p, std::size_t cap = 20000);

}  // namespace pclab
