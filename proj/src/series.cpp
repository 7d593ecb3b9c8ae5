#include "pclab/series.hpp"

#include <algorithm>
#include <cassert>
#include <random>

namespace pclab {

const char* seriesKindName(SubgroupSeries::Kind k) {
  switch (k) {
    case SubgroupSeries::Kind::Omega: return "omega";
    case SubgroupSeries::Kind::AgemoTower: return "agemo-tower";
    case SubgroupSeries::Kind::Zeta: return "zeta";
    case SubgroupSeries::Kind::Lambda: return "lambda";
    case SubgroupSeries::Kind::M: return "M";
    case SubgroupSeries::Kind::Custom: return "custom";
  }
  return "?";
}

Subgroup SubgroupSeries::termAt(int n) const {
  if (n < firstIndex) {
    if (kind == Kind::Lambda || kind == Kind::AgemoTower) return wholeSubgroup(parent);
    return trivialSubgroup(parent);
  }
  const std::size_t i = static_cast<std::size_t>(n - firstIndex);
  if (i >= terms.size()) return terms.back();
  return terms[i];
}

Subgroup omega(GroupPtr g, std::uint32_t p, std::uint32_t i) {
  if (i == 0) return trivialSubgroup(std::move(g));
  std::uint64_t pi = 1;
  for (std::uint32_t t = 0; t < i; ++t) pi *= p;
  const auto& orders = g->elementOrders();
  ClosureBuilder cb(g);
  for (Elt x = 0; x < g->order(); ++x)
    if (pi % orders[x] == 0) cb.addGenerator(x);
  return cb.build();
}

SubgroupSeries omegaSeries(GroupPtr g, std::uint32_t p) {
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::Omega;
  s.parent = g;
  s.p = p;
  s.firstIndex = 0;
  s.terms.push_back(trivialSubgroup(g));
  for (std::uint32_t i = 1;; ++i) {
    Subgroup next = omega(g, p, i);
    const bool stable = next.sameAs(s.terms.back());
    s.terms.push_back(std::move(next));
    if (stable) break;
  }
  return s;
}

OmegaExactness omegaExactSet(GroupPtr g, std::uint32_t p, std::uint32_t j) {
  Subgroup om = omega(g, p, j);
  std::uint64_t pj = 1;
  for (std::uint32_t t = 0; t < j; ++t) pj *= p;
  for (Elt m : om.members()) {
    if (pj % g->elementOrder(m) != 0) return {false, m};
  }
  return {true, std::nullopt};
}

Subgroup agemo(GroupPtr g, std::uint32_t p, std::uint32_t j) {
  return agemoOfSubgroup(g, wholeSubgroup(g), p, j);
}

Subgroup agemoOfSubgroup(GroupPtr g, const Subgroup& s, std::uint32_t p, std::uint32_t j) {
  std::uint64_t pj = 1;
  for (std::uint32_t t = 0; t < j; ++t) pj *= p;
  ClosureBuilder cb(g);
  for (Elt m : s.members()) cb.addGenerator(g->power(m, static_cast<std::int64_t>(pj)));
  return cb.build();
}

SubgroupSeries agemoTower(GroupPtr g, std::uint32_t p) {
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::AgemoTower;
  s.parent = g;
  s.p = p;
  s.firstIndex = 0;
  s.terms.push_back(wholeSubgroup(g));
  for (std::uint32_t j = 1;; ++j) {
    Subgroup next = agemo(g, p, j);
    const bool stable = next.sameAs(s.terms.back());
    s.terms.push_back(std::move(next));
    if (stable) break;
  }
  return s;
}

bool isPowerSurjective(GroupPtr g, std::uint32_t p) {
  std::vector<std::uint8_t> seen(g->order(), 0);
  std::size_t count = 0;
  for (Elt x = 0; x < g->order(); ++x) {
    const Elt y = g->power(x, p);
    if (!seen[y]) {
      seen[y] = 1;
      ++count;
    }
  }
  return count == agemo(g, p, 1).order();
}

Subgroup pthRoot(GroupPtr g, const Subgroup& n, std::uint32_t p) {
  if (!n.isNormal()) throw Error(ErrorCode::NotNormal, "pthRoot requires a normal subgroup");
  // The root set is closed under conjugation (N is normal), so its closure is
  // already the normal closure.
  ClosureBuilder cb(g);
  for (Elt x = 0; x < g->order(); ++x)
    if (n.contains(g->power(x, p))) cb.addGenerator(x);
  return cb.build();
}

SubgroupSeries zetaSeries(GroupPtr g) {
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::Zeta;
  s.parent = g;
  s.firstIndex = 0;
  s.terms.push_back(trivialSubgroup(g));
  for (;;) {
    const Subgroup& zk = s.terms.back();
    Subgroup next = [&] {
      if (zk.isTrivial()) return center(g);
      auto [quo, proj] = quotient(g, zk);
      return preimage(proj, center(quo));
    }();
    if (next.sameAs(zk)) break;
    s.terms.push_back(std::move(next));
  }
  return s;
}

SubgroupSeries lowerCentralSeries(GroupPtr g) {
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::Custom;
  s.parent = g;
  s.firstIndex = 1;
  s.terms.push_back(wholeSubgroup(g));
  for (;;) {
    Subgroup next = commutator(g, s.terms.back(), wholeSubgroup(g));
    if (next.sameAs(s.terms.back())) break;
    s.terms.push_back(std::move(next));
  }
  return s;
}

std::optional<std::uint32_t> nilpotencyClass(GroupPtr g) {
  SubgroupSeries lcs = lowerCentralSeries(g);
  if (!lcs.terms.back().isTrivial()) return std::nullopt;
  return static_cast<std::uint32_t>(lcs.terms.size() - 1);
}

SubgroupSeries lambdaSeries(GroupPtr g, std::uint32_t p, std::uint32_t k) {
  if (k < 1 || k > p - 1)
    throw Error(ErrorCode::InvalidHeight, "lambda series requires 1 <= k <= p-1");
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::Lambda;
  s.parent = g;
  s.p = p;
  s.k = k;
  s.firstIndex = 1;
  s.terms.push_back(wholeSubgroup(g));
  const Subgroup whole = wholeSubgroup(g);
  auto stable = [&] {
    if (s.terms.size() < k + 1) return false;
    for (std::size_t i = s.terms.size() - k; i < s.terms.size(); ++i)
      if (!s.terms[i].sameAs(s.terms[i - 1])) return false;
    return true;
  };
  for (int n = 2; !stable(); ++n) {
    if (n > 512) throw Error(ErrorCode::InvalidArgument, "lambda series failed to stabilize");
    Subgroup powers = agemoOfSubgroup(g, s.termAt(n - static_cast<int>(k)), p, 1);
    Subgroup comm = commutator(g, s.termAt(n - 1), whole);
    s.terms.push_back(subgroupJoin(g, powers, comm));
  }
  return s;
}

std::uint32_t kElementaryPLength(GroupPtr g, std::uint32_t p, std::uint32_t k) {
  if (!g->isPGroup(p)) throw Error(ErrorCode::NotAPGroup, "k-elementary p-length requires a p-group");
  SubgroupSeries s = lambdaSeries(g, p, k);
  std::uint32_t length = 0;
  for (int n = s.firstIndex; n <= s.lastIndex(); ++n) {
    if (!s.termAt(n).sameAs(s.termAt(n + 1))) length = static_cast<std::uint32_t>(n);
  }
  return length;
}

SubgroupSeries mSeries(GroupPtr g, std::uint32_t p) {
  if (p == 2) throw Error(ErrorCode::OddPrimeRequired, "M-series requires an odd prime");
  if (!g->isPGroup(p)) throw Error(ErrorCode::NotAPGroup, "M-series requires a p-group");
  SubgroupSeries s;
  s.kind = SubgroupSeries::Kind::M;
  s.parent = g;
  s.p = p;
  s.firstIndex = 0;
  const Subgroup om1 = omega(g, p, 1);
  for (std::uint32_t n = 0;; ++n) {
    Subgroup term = (n <= p - 1) ? iteratedCommutator(g, om1, p - n - 1)
                                 : pthRoot(g, s.terms[n - (p - 1)], p);
    const bool atTop = term.isWhole();
    s.terms.push_back(std::move(term));
    if (atTop) break;
    if (n > 512) throw Error(ErrorCode::InvalidArgument, "M-series failed to stabilize");
  }
  return s;
}

const std::vector<std::uint8_t>& FpLayer::coordsOf(Elt x) const {
  auto it = coords.find(x);
  if (it == coords.end())
    throw Error(ErrorCode::InvalidArgument, "element outside the layer's upper term");
  return it->second;
}

FpLayer buildLayer(GroupPtr g, const Subgroup& upper, const Subgroup& lower, std::uint32_t p) {
  FpLayer layer;
  ClosureBuilder span(g);
  span.addAll(lower.generators());
  for (Elt m : upper.members()) {
    if (!span.contains(m)) {
      layer.basis.push_back(m);
      span.addGenerator(m);
    }
  }
  layer.dim = static_cast<std::uint32_t>(layer.basis.size());
  if (span.size() != upper.order())
    throw Error(ErrorCode::InvalidArgument, "layer basis does not span the upper term");

  layer.coords.reserve(upper.order());
  for (Elt m : lower.members()) layer.coords.emplace(m, std::vector<std::uint8_t>(layer.dim, 0));
  for (std::uint32_t j = 0; j < layer.dim; ++j) {
    std::vector<std::pair<Elt, std::vector<std::uint8_t>>> snapshot(layer.coords.begin(), layer.coords.end());
    for (std::uint32_t c = 1; c < p; ++c) {
      const Elt prefix = g->power(layer.basis[j], c);
      for (const auto& [e, vec] : snapshot) {
        const Elt y = g->mult(prefix, e);
        auto [it, inserted] = layer.coords.emplace(y, vec);
        if (!inserted)
          throw Error(ErrorCode::HypothesisFailed, "layer is not elementary abelian over its lower term");
        it->second[j] = static_cast<std::uint8_t>(c);
      }
    }
  }
  if (layer.coords.size() != upper.order())
    throw Error(ErrorCode::HypothesisFailed, "layer coordinates do not cover the upper term");
  return layer;
}

namespace {

// Randomize a layer's representatives by multiplying each basis element with
// a random member of the lower term, then rebuild coordinates.
FpLayer rederiveLayer(GroupPtr g, const Subgroup& upper, const Subgroup& lower, std::uint32_t p,
                      std::mt19937_64& rng) {
  FpLayer base = buildLayer(g, upper, lower, p);
  if (base.dim == 0 || lower.order() == 1) return base;
  std::uniform_int_distribution<std::size_t> dist(0, lower.order() - 1);
  FpLayer layer;
  layer.dim = base.dim;
  for (std::uint32_t j = 0; j < base.dim; ++j)
    layer.basis.push_back(g->mult(base.basis[j], lower.members()[dist(rng)]));
  layer.coords.reserve(upper.order());
  for (Elt m : lower.members()) layer.coords.emplace(m, std::vector<std::uint8_t>(layer.dim, 0));
  for (std::uint32_t j = 0; j < layer.dim; ++j) {
    std::vector<std::pair<Elt, std::vector<std::uint8_t>>> snapshot(layer.coords.begin(), layer.coords.end());
    for (std::uint32_t c = 1; c < p; ++c) {
      const Elt prefix = g->power(layer.basis[j], c);
      for (const auto& [e, vec] : snapshot) {
        const Elt y = g->mult(prefix, e);
        auto [it, inserted] = layer.coords.emplace(y, vec);
        if (!inserted)
          throw Error(ErrorCode::HypothesisFailed, "layer is not elementary abelian over its lower term");
        it->second[j] = static_cast<std::uint8_t>(c);
      }
    }
  }
  return layer;
}

}  // namespace

std::uint32_t GradedFpObject::layerDim(int seriesIndex) const {
  const int i = seriesIndex - firstIndex;
  if (i < 0 || i >= static_cast<int>(layers.size())) return 0;
  return layers[i].dim;
}

std::size_t GradedFpObject::totalDim() const {
  std::size_t d = 0;
  for (const auto& l : layers) d += l.dim;
  return d;
}

GradedFpObject lambdaGraded(GroupPtr g, std::uint32_t p, std::uint32_t k, std::uint64_t alternateRepSeed) {
  if (k < 1 || k > p - 2)
    throw Error(ErrorCode::InvalidHeight, "lambda graded object requires 1 <= k <= p-2");
  SubgroupSeries s = lambdaSeries(g, p, k);
  GradedFpObject gr;
  gr.parent = g;
  gr.p = p;
  gr.k = k;
  gr.degreeShift = static_cast<int>(k);
  gr.firstIndex = 1;
  gr.upperIndexOffset = 0;

  std::mt19937_64 rng(alternateRepSeed);
  // One layer per series index up to the stable tail.
  int last = s.firstIndex;
  for (int n = s.firstIndex; n <= s.lastIndex(); ++n)
    if (!s.termAt(n).sameAs(s.termAt(n + 1))) last = n;
  for (int n = 1; n <= last; ++n) {
    const Subgroup upper = s.termAt(n);
    const Subgroup lower = s.termAt(n + 1);
    gr.layers.push_back(alternateRepSeed ? rederiveLayer(g, upper, lower, p, rng)
                                         : buildLayer(g, upper, lower, p));
  }

  // t-maps: layer n -> layer n+k, induced by x -> x^p.
  for (int n = 1; n <= last; ++n) {
    const FpLayer& src = gr.layers[n - 1];
    const std::uint32_t targetDim = gr.layerDim(n + static_cast<int>(k));
    fp::Matrix t(targetDim, src.dim, p);
    for (std::uint32_t j = 0; j < src.dim; ++j) {
      const Elt xp = g->power(src.basis[j], p);
      if (!s.termAt(n + static_cast<int>(k)).contains(xp))
        throw Error(ErrorCode::HypothesisFailed, "p-th power escapes lambda_{n+k}");
      if (targetDim > 0) {
        const auto& c = gr.layers[n + static_cast<int>(k) - 1].coordsOf(xp);
        for (std::uint32_t r = 0; r < targetDim; ++r) t.set(r, j, c[r]);
      } else if (!s.termAt(n + static_cast<int>(k) + 1).contains(xp)) {
        throw Error(ErrorCode::HypothesisFailed, "t-map target layer inconsistent");
      }
    }
    gr.tMaps.push_back(std::move(t));
  }

  // brackets: layer n x layer m -> layer n+m, induced by commutators.
  for (int n = 1; n <= last; ++n) {
    for (int m = n; m <= last; ++m) {
      const FpLayer& a = gr.layers[n - 1];
      const FpLayer& b = gr.layers[m - 1];
      if (a.dim == 0 || b.dim == 0) continue;
      const std::uint32_t targetDim = gr.layerDim(n + m);
      LayerBracket br;
      br.n = n;
      br.m = m;
      br.flat = fp::Matrix(a.dim * b.dim, targetDim == 0 ? 0 : targetDim, p);
      for (std::uint32_t i = 0; i < a.dim; ++i) {
        for (std::uint32_t j = 0; j < b.dim; ++j) {
          const Elt c = g->commutatorElt(a.basis[i], b.basis[j]);
          if (!s.termAt(n + m).contains(c))
            throw Error(ErrorCode::HypothesisFailed, "bracket escapes lambda_{n+m}");
          if (targetDim > 0) {
            const auto& cc = gr.layers[n + m - 1].coordsOf(c);
            for (std::uint32_t t = 0; t < targetDim; ++t) br.flat.set(i * b.dim + j, t, cc[t]);
          }
        }
      }
      gr.brackets.push_back(std::move(br));
    }
  }
  return gr;
}

bool isKPowerful(GroupPtr g, std::uint32_t p, std::uint32_t k) {
  GradedFpObject gr = lambdaGraded(g, p, k);
  for (std::size_t i = 0; i < gr.tMaps.size(); ++i) {
    const std::uint32_t targetDim = gr.layerDim(gr.indexOfLayer(i) + gr.degreeShift);
    if (targetDim == 0) continue;
    if (gr.tMaps[i].rank() != targetDim) return false;
  }
  return true;
}

GradedFpObject mGraded(GroupPtr g, std::uint32_t p, std::uint64_t sampleSeed) {
  SubgroupSeries s = mSeries(g, p);
  GradedFpObject gr;
  gr.parent = g;
  gr.p = p;
  gr.degreeShift = 1 - static_cast<int>(p);
  gr.firstIndex = 0;
  gr.upperIndexOffset = 1;

  // component n = M_{n+1} / M_n
  int last = -1;
  for (int n = 0; n + 1 <= s.lastIndex(); ++n)
    if (!s.termAt(n + 1).sameAs(s.termAt(n))) last = n;
  for (int n = 0; n <= last; ++n) gr.layers.push_back(buildLayer(g, s.termAt(n + 1), s.termAt(n), p));

  // additive p-power congruence (x y)^p = x^p y^p mod M_{m-p}, sampled
  std::mt19937_64 rng(sampleSeed);
  for (int n = 0; n <= last; ++n) {
    for (int m = 0; m <= n; ++m) {
      const Subgroup& mn = s.termAt(n + 1);
      const Subgroup& mm = s.termAt(m + 1);
      const Subgroup modTerm = s.termAt(m + 1 - static_cast<int>(p));
      auto checkPair = [&](Elt x, Elt y) {
        const Elt lhs = g->power(g->mult(x, y), p);
        const Elt rhs = g->mult(g->power(x, p), g->power(y, p));
        return modTerm.contains(g->mult(g->inverse(rhs), lhs));
      };
      const std::uint64_t pairs = static_cast<std::uint64_t>(mn.order()) * mm.order();
      if (pairs <= 1000000) {
        for (Elt x : mn.members())
          for (Elt y : mm.members())
            if (!checkPair(x, y))
              throw Error(ErrorCode::HypothesisFailed, "additive p-power congruence fails");
      } else {
        std::uniform_int_distribution<std::size_t> dx(0, mn.order() - 1), dy(0, mm.order() - 1);
        for (int t = 0; t < 10000; ++t)
          if (!checkPair(mn.members()[dx(rng)], mm.members()[dy(rng)]))
            throw Error(ErrorCode::HypothesisFailed, "additive p-power congruence fails");
      }
    }
  }

  for (int n = 0; n <= last; ++n) {
    const FpLayer& src = gr.layers[n];
    const int target = n + gr.degreeShift;
    const std::uint32_t targetDim = gr.layerDim(target);
    fp::Matrix t(targetDim, src.dim, p);
    for (std::uint32_t j = 0; j < src.dim; ++j) {
      const Elt xp = g->power(src.basis[j], p);
      if (target < 0 || targetDim == 0) {
        // Target component is zero in the graded module; the power must land
        // in the lower term (identity for negative indices).
        if (!s.termAt(target).contains(xp))
          throw Error(ErrorCode::HypothesisFailed, "p-th power escapes the target M-term");
      } else {
        if (!s.termAt(target + 1).contains(xp))
          throw Error(ErrorCode::HypothesisFailed, "p-th power escapes the target M-term");
        const auto& c = gr.layers[target].coordsOf(xp);
        for (std::uint32_t r = 0; r < targetDim; ++r) t.set(r, j, c[r]);
      }
    }
    gr.tMaps.push_back(std::move(t));
  }
  return gr;
}

std::vector<fp::Matrix> gradedAnnihilator(const GradedFpObject& m) {
  std::vector<fp::Matrix> ann;
  for (const auto& t : m.tMaps) ann.push_back(t.nullspaceBasis());
  return ann;
}

std::vector<fp::Matrix> gradedSubspaceOf(const GradedFpObject& m, const SubgroupSeries& series,
                                         const Subgroup& q) {
  std::vector<fp::Matrix> out;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const int n = m.indexOfLayer(static_cast<int>(i));
    const Subgroup upper = series.termAt(n + m.upperIndexOffset);
    fp::Matrix rows(0, m.layers[i].dim, m.p);
    for (Elt x : q.members()) {
      if (!upper.contains(x)) continue;
      const auto& c = m.layers[i].coordsOf(x);
      rows.appendRow(c);
    }
    out.push_back(rows.rref());
  }
  return out;
}

bool isPiCentralOfHeight(GroupPtr g, std::uint32_t p, std::uint32_t i, std::uint32_t k) {
  if (i < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "height test requires i, k >= 1");
  const Subgroup om = omega(g, p, i);
  const SubgroupSeries zs = zetaSeries(g);
  const int idx = std::min<int>(static_cast<int>(k), zs.lastIndex());
  return zs.termAt(idx).containsSubgroup(om);
}

}  // namespace pclab
