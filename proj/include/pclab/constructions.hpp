#pragma once

#include "pclab/group.hpp"

namespace pclab {

// Named constructors for the example families: matrix groups over residue
// rings, wreath pull-backs, PL groups, and the semidirect fixtures.

inline constexpr std::uint64_t kDefaultMaxOrder = 1ull << 21;

// SL_2(Z/p^n Z), enumerated from the elementary matrices. Payloads are kept
// (entries a, b, c, d mod p^n), so congruence kernels remain addressable.
GroupPtr matrixGroupSL2(std::uint32_t p, std::uint32_t n, std::uint64_t maxOrder = kDefaultMaxOrder);

// Congruence kernel K_m = {A : A = I mod p^m} as a subgroup of a group built
// by matrixGroupSL2 / sylowSL2Standalone.
Subgroup congruenceKernel(GroupPtr sl2, std::uint32_t p, std::uint32_t m);

struct SL2WithSylow {
  GroupPtr group;
  Subgroup sylow;
};
SL2WithSylow buildSL2ZmodAndSylow(std::uint32_t p, std::uint32_t n,
                                  std::uint64_t maxOrder = kDefaultMaxOrder);

// Syl_p(SL_2(Z/p^n Z)) built standalone as a matrix p-group (the preimage of
// the upper unitriangular subgroup mod p), order p^(3n-2).
GroupPtr sylowSL2Standalone(std::uint32_t p, std::uint32_t n, std::uint64_t maxOrder = kDefaultMaxOrder);

// Extraspecial group of order p^3 and exponent p (p odd).
GroupPtr heisenberg(std::uint32_t p, std::uint64_t maxOrder = kDefaultMaxOrder);
// Modular group of order p^3 (exponent p^2): C_{p^2} x| C_p via a -> a^{1+p}.
GroupPtr modularP3(std::uint32_t p, std::uint64_t maxOrder = kDefaultMaxOrder);

// C_p wr C_p together with the canonical projection beta onto the top C_p
// (elementary abelian kernel).
struct WreathWithBeta {
  GroupPtr wreath;
  GroupPtr top;
  Homomorphism beta;
};
WreathWithBeta wreathCpCpWithBeta(std::uint32_t p, std::uint64_t maxOrder = kDefaultMaxOrder);

// Y_p(m): pull-back of C_{p^m} -> C_p <- C_p wr C_p.
GroupPtr buildYpm(std::uint32_t p, std::uint32_t m, std::uint64_t maxOrder = kDefaultMaxOrder);

// PL(M) = {id + p.alpha} for M = direct sum of Z/p^{e_i}; orders are given as
// the list of p-power cyclic orders (e.g. {9, 9} for Z/9 + Z/9).
GroupPtr buildPL(std::uint32_t p, const std::vector<std::uint32_t>& cyclicOrders,
                 std::uint64_t maxOrder = kDefaultMaxOrder);

// C_q x| C_{p^2} with the action through the order-p quotient; q = 1 mod p.
// p-central of height 1, p-nilpotent, not nilpotent.
GroupPtr buildThmAFixture(std::uint32_t p, std::uint32_t q, std::uint64_t maxOrder = kDefaultMaxOrder);
// Height-2 variant: the fixture above times an extraspecial exponent-p group.
GroupPtr buildThmAFixtureHeight2(std::uint32_t p, std::uint32_t q,
                                 std::uint64_t maxOrder = kDefaultMaxOrder);

// Soluble sandwich fixtures with p-central Sylow subgroups.
GroupPtr sandwichElemAbelianInv(std::uint32_t p, std::uint64_t maxOrder = kDefaultMaxOrder);
GroupPtr sandwichHeisenbergInv(std::uint32_t p, std::uint64_t maxOrder = kDefaultMaxOrder);

// Finite truncation of the torsion counterexample: C_{p^{i+1}} acting on
// ((Z/p^s)[A] / Delta) ~ (Z/p^s)^(p-1) through its order-p quotient.
GroupPtr thmBTruncation(std::uint32_t p, std::uint32_t i, std::uint32_t s,
                        std::uint64_t maxOrder = kDefaultMaxOrder);

std::uint32_t multiplicativeOrderMod(std::uint32_t a, std::uint32_t modulus);
bool isPrime(std::uint32_t n);

}  // namespace pclab
