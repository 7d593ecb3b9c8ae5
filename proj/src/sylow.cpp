#include "pclab/sylow.hpp"

#include <algorithm>
#include <random>

namespace pclab {

namespace {

bool isPPower(std::uint64_t n, std::uint32_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

Subgroup sylowAscent(GroupPtr g, std::uint32_t p, bool fromLast) {
  const std::uint32_t pPart = g->pPart(p);
  if (pPart == 1) return trivialSubgroup(g);
  if (g->order() == pPart) return wholeSubgroup(g);
  const auto& orders = g->elementOrders();

  std::uint32_t maxPOrder = 1;
  for (Elt x = 0; x < g->order(); ++x)
    if (isPPower(orders[x], p)) maxPOrder = std::max(maxPOrder, orders[x]);
  Elt seed = kNoElt;
  for (Elt x = 0; x < g->order(); ++x) {
    if (orders[x] == maxPOrder && isPPower(orders[x], p)) {
      seed = x;
      if (!fromLast) break;
    }
  }

  ClosureBuilder cb(g);
  cb.addGenerator(seed);
  Subgroup q = cb.build();
  while (q.order() < pPart) {
    Subgroup n = normalizer(g, q);
    Elt next = kNoElt;
    for (Elt x : n.members()) {
      if (x != kIdentity && isPPower(orders[x], p) && !q.contains(x)) {
        next = x;
        break;
      }
    }
    if (next == kNoElt)
      throw Error(ErrorCode::InvalidArgument, "sylow ascent stalled");  // cannot happen (Sylow theory)
    ClosureBuilder ext(g);
    ext.addAll(q.generators());
    ext.addGenerator(next);
    q = ext.build();
    if (!q.isPGroupSubgroup(p))
      throw Error(ErrorCode::InvalidArgument, "sylow ascent left the p-world");
  }
  return q;
}

}  // namespace

Subgroup sylowSubgroup(GroupPtr g, std::uint32_t p) { return sylowAscent(std::move(g), p, false); }
Subgroup sylowSubgroupAlt(GroupPtr g, std::uint32_t p) { return sylowAscent(std::move(g), p, true); }

Subgroup opCore(GroupPtr g, std::uint32_t p) {
  const Subgroup syl = sylowSubgroup(g, p);
  if (syl.isTrivial() || syl.isWhole()) return syl;
  const Subgroup n = normalizer(g, syl);
  std::vector<Elt> current = syl.members();
  std::vector<std::uint8_t> cosetSeen(g->order(), 0);
  for (Elt r = 0; r < g->order() && current.size() > 1; ++r) {
    if (cosetSeen[r]) continue;
    for (Elt m : n.members()) cosetSeen[g->mult(r, m)] = 1;
    // keep x with r^-1 x r in P, i.e. x in r P r^-1
    const Elt rInv = g->inverse(r);
    std::vector<Elt> kept;
    kept.reserve(current.size());
    for (Elt x : current)
      if (syl.contains(g->conjugate(rInv, x))) kept.push_back(x);
    current = std::move(kept);
  }
  return subgroupFromMembers(g, std::move(current));
}

Subgroup opPrimeCore(GroupPtr g, std::uint32_t p) {
  const std::uint32_t cap = g->order() / g->pPart(p);
  const auto& orders = g->elementOrders();
  std::vector<std::uint8_t> rejected(g->order(), 0);
  Subgroup s = trivialSubgroup(g);
  for (;;) {
    bool changed = false;
    for (Elt x = 0; x < g->order(); ++x) {
      if (x == kIdentity || orders[x] % p == 0 || rejected[x] || s.contains(x)) continue;
      // x joins iff its normal closure is a p'-group; a whole rejected
      // conjugacy orbit is marked at once (the closure depends only on it).
      std::vector<Elt> orbit{x};
      std::vector<std::uint8_t> seen(g->order(), 0);
      seen[x] = 1;
      bool small = true;
      for (std::size_t head = 0; head < orbit.size() && small; ++head) {
        for (Elt c : g->generators()) {
          for (Elt y : {g->conjugate(c, orbit[head]), g->conjugate(g->inverse(c), orbit[head])}) {
            if (!seen[y]) {
              seen[y] = 1;
              orbit.push_back(y);
              if (orbit.size() > cap) {
                small = false;
                break;
              }
            }
          }
          if (!small) break;
        }
      }
      auto rejectOrbit = [&] {
        for (Elt y : orbit) rejected[y] = 1;
      };
      if (!small) {
        rejectOrbit();
        continue;
      }
      ClosureBuilder cb(g, cap);
      bool fits = cb.addAll(s.generators());
      for (Elt y : orbit) {
        if (!fits) break;
        fits = cb.addGenerator(y);
      }
      if (!fits) {
        rejectOrbit();
        continue;
      }
      Subgroup candidate = cb.build();
      if (candidate.order() % p == 0) {
        rejectOrbit();
        continue;
      }
      s = std::move(candidate);
      changed = true;
    }
    if (!changed) break;
  }
  return s;
}

PNilpotency isPNilpotent(GroupPtr g, std::uint32_t p) {
  const std::uint32_t pPrimePart = g->order() / g->pPart(p);
  const auto& orders = g->elementOrders();
  ClosureBuilder cb(g, pPrimePart);
  bool fits = true;
  for (Elt x = 0; x < g->order() && fits; ++x)
    if (orders[x] % p != 0) fits = cb.addGenerator(x);
  const bool yes = fits && cb.size() == pPrimePart;

  // Second characterization: the p'-element set is multiplicatively closed.
  std::vector<Elt> pPrime;
  for (Elt x = 0; x < g->order(); ++x)
    if (orders[x] % p != 0) pPrime.push_back(x);
  bool closed = true;
  const std::uint64_t pairs = static_cast<std::uint64_t>(pPrime.size()) * pPrime.size();
  if (pairs <= 1000000) {
    for (Elt a : pPrime) {
      for (Elt b : pPrime)
        if (orders[g->mult(a, b)] % p == 0) {
          closed = false;
          break;
        }
      if (!closed) break;
    }
  } else {
    std::mt19937_64 rng(0x5ca1ab1e);
    std::uniform_int_distribution<std::size_t> d(0, pPrime.size() - 1);
    for (int t = 0; t < 10000 && closed; ++t)
      closed = orders[g->mult(pPrime[d(rng)], pPrime[d(rng)])] % p != 0;
  }
  if (yes != closed)
    throw Error(ErrorCode::InvalidArgument, "p-nilpotency characterizations disagree (internal)");

  if (!yes) return {false, std::nullopt};
  return {true, cb.build()};
}

CoreProfile oppTower(GroupPtr g, std::uint32_t p) {
  CoreProfile profile{.p = p,
                      .sylow = sylowSubgroup(g, p),
                      .oP = opCore(g, p),
                      .oPprime = opPrimeCore(g, p),
                      .oPprimeP = trivialSubgroup(g),
                      .oPprimePPprime = trivialSubgroup(g)};
  {
    auto [q1, proj1] = quotient(g, profile.oPprime);
    profile.oPprimeP = preimage(proj1, opCore(q1, p));
  }
  {
    auto [q2, proj2] = quotient(g, profile.oPprimeP);
    profile.oPprimePPprime = preimage(proj2, opPrimeCore(q2, p));
  }
  profile.isSandwich = profile.oPprimePPprime.isWhole();
  profile.isPNilpotent = isPNilpotent(g, p).pNilpotent;
  return profile;
}

bool pSolubleViaTower(GroupPtr g, std::uint32_t p) {
  Subgroup k = trivialSubgroup(g);
  for (;;) {
    auto [q1, proj1] = quotient(g, k);
    Subgroup next = preimage(proj1, opPrimeCore(q1, p));
    if (next.sameAs(k)) {
      auto [q2, proj2] = quotient(g, k);
      next = preimage(proj2, opCore(q2, p));
      if (next.sameAs(k)) break;
    }
    k = std::move(next);
  }
  return k.isWhole();
}

}  // namespace pclab
