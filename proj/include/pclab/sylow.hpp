#pragma once

#include <optional>

#include "pclab/group.hpp"

namespace pclab {

// Sylow theory, characteristic cores, p-nilpotency, and the p'pp' tower.

// Sylow p-subgroup by normalizer ascent: start from a maximal-order
// p-element and extend inside the normalizer by p-elements outside the
// current subgroup. Returns the trivial subgroup when p does not divide |G|.
Subgroup sylowSubgroup(GroupPtr g, std::uint32_t p);
// Ascent from the LAST maximal-order p-element instead of the first; used to
// probe conjugacy of independently grown Sylow subgroups.
Subgroup sylowSubgroupAlt(GroupPtr g, std::uint32_t p);

// Largest normal p-subgroup, as the intersection of the Sylow conjugates
// over coset representatives of the normalizer.
Subgroup opCore(GroupPtr g, std::uint32_t p);

// Largest normal subgroup of order coprime to p: join of the normal closures
// of p'-elements whose normal closure is a p'-group, iterated to stability.
Subgroup opPrimeCore(GroupPtr g, std::uint32_t p);

struct PNilpotency {
  bool pNilpotent;
  std::optional<Subgroup> complement;  // the normal p-complement when it exists
};
// G is p-nilpotent iff the closure of all p'-elements has p'-order (it is
// then the normal complement). Cross-checked against multiplicative
// closedness of the p'-element set.
PNilpotency isPNilpotent(GroupPtr g, std::uint32_t p);

struct CoreProfile {
  std::uint32_t p = 0;
  Subgroup sylow;
  Subgroup oP;
  Subgroup oPprime;
  Subgroup oPprimeP;
  Subgroup oPprimePPprime;
  bool isPNilpotent = false;
  bool isSandwich = false;
};
// O_{p'}(G) <= O_{p',p}(G) <= O_{p',p,p'}(G) via quotients and preimages;
// isSandwich iff the tower reaches G.
CoreProfile oppTower(GroupPtr g, std::uint32_t p);

// Upper p-series evidence of p-solubility: alternate O_{p'} / O_p preimage
// steps until stable; p-soluble iff the chain reaches G.
bool pSolubleViaTower(GroupPtr g, std::uint32_t p);

}  // namespace pclab
