#include "pclab/group.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

namespace pclab {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::MalformedExpr: return "MalformedExpr";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::IncompatibleCodomain: return "IncompatibleCodomain";
    case ErrorCode::InvalidHeight: return "InvalidHeight";
    case ErrorCode::NotAPGroup: return "NotAPGroup";
    case ErrorCode::OddPrimeRequired: return "OddPrimeRequired";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::NotUnipotentOrderP: return "NotUnipotentOrderP";
    case ErrorCode::InvalidPrimes: return "InvalidPrimes";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

struct PayloadHash {
  std::size_t operator()(const Payload& p) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t v : p) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

// --- Group ------------------------------------------------------------------

GroupPtr Group::enumerate(const MultOracle& oracle, const std::vector<Payload>& generatorPayloads,
                          std::uint64_t maxOrder, bool keepPayloads, std::string description) {
  if (maxOrder < 1) throw Error(ErrorCode::InvalidArgument, "maxOrder must be >= 1");
  auto g = std::shared_ptr<Group>(new Group());
  g->backend_ = oracle.backend();
  g->description_ = std::move(description);

  const Payload id = oracle.identity();
  std::vector<Payload> gens;
  for (const auto& p : generatorPayloads) {
    if (p == id) continue;
    if (std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(p);
  }

  std::vector<Payload> elems;
  std::unordered_map<Payload, Elt, PayloadHash> index;
  elems.push_back(id);
  index.emplace(id, 0);
  g->parent_.push_back(0);
  g->genOrd_.push_back(0xFFFF);
  g->leftTables_.assign(gens.size(), {});

  for (std::size_t k = 0; k < elems.size(); ++k) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Payload child = oracle.multiply(gens[i], elems[k]);
      auto [it, inserted] = index.emplace(std::move(child), static_cast<Elt>(elems.size()));
      if (inserted) {
        if (elems.size() + 1 > maxOrder)
          throw Error(ErrorCode::SizeCapExceeded,
                      "generator closure exceeds size cap " + std::to_string(maxOrder));
        elems.push_back(it->first);
        g->parent_.push_back(static_cast<Elt>(k));
        g->genOrd_.push_back(static_cast<std::uint16_t>(i));
      }
      g->leftTables_[i].push_back(it->second);
    }
  }

  g->order_ = static_cast<std::uint32_t>(elems.size());
  g->generators_.reserve(gens.size());
  for (const auto& p : gens) g->generators_.push_back(index.at(p));
  g->bfsOrder_.resize(g->order_);
  std::iota(g->bfsOrder_.begin(), g->bfsOrder_.end(), 0);
  if (keepPayloads) g->payloads_ = std::move(elems);
  g->finalize();
  return g;
}

GroupPtr Group::fromTables(std::vector<std::vector<Elt>> leftTables, std::vector<Elt> generators,
                           Backend backend, std::string description, std::vector<Payload> payloads) {
  auto g = std::shared_ptr<Group>(new Group());
  g->backend_ = backend;
  g->description_ = std::move(description);
  g->leftTables_ = std::move(leftTables);
  g->generators_ = std::move(generators);
  g->payloads_ = std::move(payloads);
  const std::size_t n = g->leftTables_.empty() ? 1 : g->leftTables_[0].size();
  g->order_ = static_cast<std::uint32_t>(n);
  if (g->generators_.size() != g->leftTables_.size())
    throw Error(ErrorCode::InvalidArgument, "fromTables: generator/table count mismatch");
  for (const auto& t : g->leftTables_) {
    if (t.size() != n) throw Error(ErrorCode::InvalidArgument, "fromTables: ragged tables");
    std::vector<std::uint8_t> seen(n, 0);
    for (Elt y : t) {
      if (y >= n || seen[y]) throw Error(ErrorCode::InvalidArgument, "fromTables: table is not a permutation");
      seen[y] = 1;
    }
  }

  g->parent_.assign(n, kNoElt);
  g->genOrd_.assign(n, 0xFFFF);
  g->parent_[0] = 0;
  g->bfsOrder_.clear();
  g->bfsOrder_.push_back(0);
  for (std::size_t head = 0; head < g->bfsOrder_.size(); ++head) {
    const Elt x = g->bfsOrder_[head];
    for (std::size_t i = 0; i < g->leftTables_.size(); ++i) {
      const Elt y = g->leftTables_[i][x];
      if (g->parent_[y] == kNoElt && y != 0) {
        g->parent_[y] = x;
        g->genOrd_[y] = static_cast<std::uint16_t>(i);
        g->bfsOrder_.push_back(y);
      }
    }
  }
  if (g->bfsOrder_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "fromTables: generators do not generate");
  g->finalize();
  return g;
}

void Group::finalize() {
  genInverse_.assign(generators_.size(), kNoElt);
  for (std::size_t i = 0; i < leftTables_.size(); ++i) {
    for (Elt x = 0; x < order_; ++x) {
      if (leftTables_[i][x] == kIdentity) {
        genInverse_[i] = x;
        break;
      }
    }
  }
  inverse_.assign(order_, kNoElt);
  inverse_[kIdentity] = kIdentity;
  for (Elt x : bfsOrder_) {
    if (x == kIdentity) continue;
    // x = g_i * parent  =>  x^-1 = parent^-1 * g_i^-1
    inverse_[x] = mult(inverse_[parent_[x]], genInverse_[genOrd_[x]]);
  }
}

Elt Group::mult(Elt a, Elt b) const {
  thread_local std::vector<std::uint16_t> word;
  word.clear();
  while (a != kIdentity) {
    word.push_back(genOrd_[a]);
    a = parent_[a];
  }
  Elt x = b;
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = leftTables_[*it][x];
  return x;
}

Elt Group::power(Elt x, std::int64_t e) const {
  if (e < 0) {
    x = inverse_[x];
    e = -e;
  }
  Elt acc = kIdentity;
  Elt base = x;
  std::uint64_t k = static_cast<std::uint64_t>(e);
  while (k) {
    if (k & 1) acc = mult(acc, base);
    base = mult(base, base);
    k >>= 1;
  }
  return acc;
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>>& Group::orderFactorization() const {
  std::call_once(factorOnce_, [this] {
    std::uint32_t n = order_;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
      if (n % d == 0) {
        std::uint32_t e = 0;
        while (n % d == 0) {
          n /= d;
          ++e;
        }
        factors_.emplace_back(d, e);
      }
    }
    if (n > 1) factors_.emplace_back(n, 1);
  });
  return factors_;
}

std::uint32_t Group::pPart(std::uint32_t p) const {
  std::uint32_t part = 1, n = order_;
  while (n % p == 0) {
    part *= p;
    n /= p;
  }
  return part;
}

const std::vector<std::uint32_t>& Group::elementOrders() const {
  std::call_once(ordersOnce_, [this] {
    orders_.assign(order_, 1);
    const auto& factors = orderFactorization();
    for (Elt x = 0; x < order_; ++x) {
      std::uint32_t ord = order_;
      for (auto [q, e] : factors) {
        (void)e;
        while (ord % q == 0 && power(x, ord / q) == kIdentity) ord /= q;
      }
      orders_[x] = ord;
    }
  });
  return orders_;
}

std::uint32_t Group::elementOrder(Elt x) const { return elementOrders()[x]; }

std::uint64_t Group::exponent() const {
  const auto& ords = elementOrders();
  std::uint64_t e = 1;
  for (auto o : ords) e = std::lcm(e, static_cast<std::uint64_t>(o));
  return e;
}

bool Group::isPGroup(std::uint32_t p) const {
  std::uint32_t n = order_;
  while (n % p == 0) n /= p;
  return n == 1;
}

std::vector<std::uint16_t> Group::wordOf(Elt x) const {
  std::vector<std::uint16_t> word;
  while (x != kIdentity) {
    word.push_back(genOrd_[x]);
    x = parent_[x];
  }
  return word;
}

std::string Group::describeElement(Elt x) const {
  if (x == kIdentity) return "e";
  auto word = wordOf(x);
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < word.size()) {
    std::size_t j = i;
    while (j < word.size() && word[j] == word[i]) ++j;
    if (!first) os << "*";
    os << "g" << word[i];
    if (j - i > 1) os << "^" << (j - i);
    first = false;
    i = j;
  }
  return os.str();
}

const std::vector<Payload>& Group::payloads() const {
  if (payloads_.empty() && order_ > 1)
    throw Error(ErrorCode::InvalidArgument, "payloads were not retained for this group");
  return payloads_;
}

// --- Subgroup -----------------------------------------------------------------

Subgroup::Subgroup(GroupPtr parent, std::vector<Elt> sortedMembers, std::vector<Elt> generators)
    : parent_(std::move(parent)), members_(std::move(sortedMembers)), generators_(std::move(generators)) {
  if (members_.empty() || members_[0] != kIdentity)
    throw Error(ErrorCode::InvalidArgument, "subgroup must contain the identity");
  if (parent_->order() % members_.size() != 0)
    throw Error(ErrorCode::InvalidArgument, "Lagrange violation: subgroup size does not divide group order");
}

bool Subgroup::contains(Elt x) const { return std::binary_search(members_.begin(), members_.end(), x); }

bool Subgroup::isNormal() const {
  std::lock_guard lock(cacheMutex_);
  if (normal_.has_value()) return *normal_;
  bool ok = true;
  for (Elt g : parent_->generators()) {
    for (Elt s : generators_) {
      if (!contains(parent_->conjugate(g, s))) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
  }
  normal_ = ok;
  return ok;
}

bool Subgroup::isPGroupSubgroup(std::uint32_t p) const {
  std::size_t n = members_.size();
  while (n % p == 0) n /= p;
  return n == 1;
}

bool Subgroup::isAbelian() const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (parent_->mult(generators_[i], generators_[j]) != parent_->mult(generators_[j], generators_[i]))
        return false;
  return true;
}

std::uint64_t Subgroup::exponentOfSubgroup() const {
  std::uint64_t e = 1;
  for (Elt m : members_) e = std::lcm(e, static_cast<std::uint64_t>(parent_->elementOrder(m)));
  return e;
}

bool Subgroup::containsSubgroup(const Subgroup& o) const {
  for (Elt m : o.members_)
    if (!contains(m)) return false;
  return true;
}

// --- Homomorphism ---------------------------------------------------------

bool Homomorphism::isSurjective() const {
  std::vector<std::uint8_t> hit(target->order(), 0);
  std::size_t count = 0;
  for (Elt y : image)
    if (!hit[y]) {
      hit[y] = 1;
      ++count;
    }
  return count == target->order();
}

bool Homomorphism::isInjective() const { return kernelMembers().size() == 1; }

std::vector<Elt> Homomorphism::kernelMembers() const {
  std::vector<Elt> ker;
  for (Elt x = 0; x < source->order(); ++x)
    if (image[x] == kIdentity) ker.push_back(x);
  return ker;
}

Homomorphism Homomorphism::fromGeneratorImages(GroupPtr source, GroupPtr target,
                                               const std::vector<Elt>& genImages) {
  if (genImages.size() != source->generators().size())
    throw Error(ErrorCode::InvalidAction, "generator image count mismatch");
  const std::uint32_t n = source->order();
  std::vector<Elt> img(n, kNoElt);
  img[kIdentity] = kIdentity;
  for (Elt x = 0; x < n; ++x) {
    if (x == kIdentity) continue;
    img[x] = target->mult(genImages[source->genOrdinalOf(x)], img[source->parentOf(x)]);
  }
  for (std::size_t i = 0; i < genImages.size(); ++i) {
    auto table = source->leftTable(i);
    for (Elt x = 0; x < n; ++x) {
      if (img[table[x]] != target->mult(genImages[i], img[x]))
        throw Error(ErrorCode::InvalidAction, "generator images do not define a homomorphism");
    }
  }
  return Homomorphism{std::move(source), std::move(target), std::move(img)};
}

// --- ClosureBuilder ---------------------------------------------------------

ClosureBuilder::ClosureBuilder(GroupPtr g, std::uint64_t sizeCap)
    : g_(std::move(g)), cap_(sizeCap == 0 ? g_->order() : sizeCap), marks_(g_->order(), 0) {
  marks_[kIdentity] = 1;
  members_.push_back(kIdentity);
}

bool ClosureBuilder::addGenerator(Elt gen) {
  if (marks_[gen]) return true;
  gens_.push_back(gen);
  processed_.push_back(0);
  return process();
}

bool ClosureBuilder::addAll(std::span<const Elt> gens) {
  for (Elt g : gens)
    if (!addGenerator(g)) return false;
  return true;
}

bool ClosureBuilder::process() {
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      while (processed_[j] < members_.size()) {
        const Elt y = g_->mult(gens_[j], members_[processed_[j]++]);
        if (!marks_[y]) {
          if (members_.size() + 1 > cap_) return false;
          marks_[y] = 1;
          members_.push_back(y);
          progressed = true;
        }
      }
    }
  }
  return true;
}

Subgroup ClosureBuilder::build() const {
  std::vector<Elt> sorted = members_;
  std::sort(sorted.begin(), sorted.end());
  return Subgroup(g_, std::move(sorted), gens_);
}

// --- subgroup machinery ----------------------------------------------------

Subgroup trivialSubgroup(GroupPtr g) { return Subgroup(std::move(g), {kIdentity}, {}); }

Subgroup wholeSubgroup(GroupPtr g) {
  std::vector<Elt> all(g->order());
  std::iota(all.begin(), all.end(), 0);
  auto gens = g->generators();
  return Subgroup(std::move(g), std::move(all), std::move(gens));
}

Subgroup closure(GroupPtr g, std::span<const Elt> seed) {
  ClosureBuilder cb(g);
  cb.addAll(seed);
  return cb.build();
}

Subgroup normalClosure(GroupPtr g, std::span<const Elt> seed) {
  // Conjugation closure of the seed first, then the generated subgroup.
  std::vector<std::uint8_t> seen(g->order(), 0);
  std::vector<Elt> orbit;
  for (Elt s : seed) {
    if (s != kIdentity && !seen[s]) {
      seen[s] = 1;
      orbit.push_back(s);
    }
  }
  const auto& gens = g->generators();
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    const Elt x = orbit[head];
    for (Elt c : gens) {
      for (Elt y : {g->conjugate(c, x), g->conjugate(g->inverse(c), x)}) {
        if (!seen[y]) {
          seen[y] = 1;
          orbit.push_back(y);
        }
      }
    }
  }
  ClosureBuilder cb(g);
  for (Elt x : orbit) cb.addGenerator(x);
  return cb.build();
}

Subgroup commutator(GroupPtr g, const Subgroup& n, const Subgroup& m) {
  std::vector<Elt> jGens;
  for (Elt x : n.generators())
    if (std::find(jGens.begin(), jGens.end(), x) == jGens.end()) jGens.push_back(x);
  for (Elt x : m.generators())
    if (std::find(jGens.begin(), jGens.end(), x) == jGens.end()) jGens.push_back(x);

  ClosureBuilder cb(g);
  for (Elt a : n.generators())
    for (Elt b : m.generators()) cb.addGenerator(g->commutatorElt(a, b));
  // Saturate by conjugation inside <N, M>.
  std::size_t scanned = 0;
  while (scanned < cb.membersUnsorted().size()) {
    const Elt x = cb.membersUnsorted()[scanned++];
    for (Elt c : jGens) {
      const Elt y = g->conjugate(c, x);
      if (!cb.contains(y)) cb.addGenerator(y);
    }
  }
  return cb.build();
}

Subgroup iteratedCommutator(GroupPtr g, const Subgroup& n, std::uint32_t k) {
  Subgroup acc = n;
  const Subgroup whole = wholeSubgroup(g);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (acc.isTrivial()) return acc;
    acc = commutator(g, acc, whole);
  }
  return acc;
}

Subgroup centralizer(GroupPtr g, const Subgroup& s) {
  std::vector<Elt> members;
  for (Elt x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (Elt t : s.generators()) {
      if (g->conjugate(x, t) != t) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(x);
  }
  return subgroupFromMembers(std::move(g), std::move(members));
}

Subgroup normalizer(GroupPtr g, const Subgroup& s) {
  std::vector<Elt> members;
  for (Elt x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (Elt t : s.generators()) {
      if (!s.contains(g->conjugate(x, t))) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(x);
  }
  return subgroupFromMembers(std::move(g), std::move(members));
}

Subgroup center(GroupPtr g) { return centralizer(g, wholeSubgroup(g)); }

Subgroup derivedSubgroup(GroupPtr g) {
  const Subgroup whole = wholeSubgroup(g);
  return commutator(g, whole, whole);
}

Subgroup subgroupJoin(GroupPtr g, const Subgroup& a, const Subgroup& b) {
  ClosureBuilder cb(std::move(g));
  cb.addAll(a.generators());
  cb.addAll(b.generators());
  return cb.build();
}

Subgroup subgroupIntersect(const Subgroup& a, const Subgroup& b) {
  std::vector<Elt> members;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                        std::back_inserter(members));
  return subgroupFromMembers(a.parent(), std::move(members));
}

Subgroup conjugateSubgroup(GroupPtr g, Elt c, const Subgroup& s) {
  std::vector<Elt> members;
  members.reserve(s.order());
  for (Elt m : s.members()) members.push_back(g->conjugate(c, m));
  std::sort(members.begin(), members.end());
  std::vector<Elt> gens;
  for (Elt t : s.generators()) gens.push_back(g->conjugate(c, t));
  return Subgroup(std::move(g), std::move(members), std::move(gens));
}

std::vector<Elt> extractGenerators(GroupPtr g, const std::vector<Elt>& sortedMembers) {
  if (sortedMembers.size() == g->order()) return g->generators();
  ClosureBuilder cb(g);
  for (Elt m : sortedMembers) {
    if (!cb.contains(m)) cb.addGenerator(m);
  }
  return cb.generatorsUsed();
}

Subgroup subgroupFromMembers(GroupPtr g, std::vector<Elt> sortedMembers) {
  std::sort(sortedMembers.begin(), sortedMembers.end());
  auto gens = extractGenerators(g, sortedMembers);
  return Subgroup(std::move(g), std::move(sortedMembers), std::move(gens));
}

// --- quotient ----------------------------------------------------------------

std::pair<GroupPtr, Homomorphism> quotient(GroupPtr g, const Subgroup& n) {
  if (!n.isNormal()) throw Error(ErrorCode::NotNormal, "quotient by a non-normal subgroup");
  const std::uint32_t order = g->order();
  std::vector<Elt> label(order, kNoElt);
  std::vector<Elt> reps;
  for (Elt x = 0; x < order; ++x) {
    if (label[x] != kNoElt) continue;
    const Elt c = static_cast<Elt>(reps.size());
    reps.push_back(x);
    for (Elt m : n.members()) label[g->mult(x, m)] = c;
  }
  const std::size_t q = reps.size();

  std::vector<Elt> qGens;
  std::vector<Elt> qGenPre;
  for (Elt gen : g->generators()) {
    const Elt img = label[gen];
    if (img == kIdentity) continue;
    if (std::find(qGens.begin(), qGens.end(), img) == qGens.end()) {
      qGens.push_back(img);
      qGenPre.push_back(gen);
    }
  }
  std::vector<std::vector<Elt>> tables(qGens.size());
  for (std::size_t i = 0; i < qGens.size(); ++i) {
    tables[i].resize(q);
    for (std::size_t c = 0; c < q; ++c) tables[i][c] = label[g->mult(qGenPre[i], reps[c])];
  }
  auto quo = Group::fromTables(std::move(tables), std::move(qGens), Backend::CosetQuotient,
                               g->description() + "/N" + std::to_string(n.order()));
  Homomorphism proj{g, quo, std::move(label)};
  return {std::move(quo), std::move(proj)};
}

Subgroup preimage(const Homomorphism& phi, const Subgroup& ofTarget) {
  std::vector<std::uint8_t> inT(phi.target->order(), 0);
  for (Elt m : ofTarget.members()) inT[m] = 1;
  std::vector<Elt> members;
  for (Elt x = 0; x < phi.source->order(); ++x)
    if (inT[phi.image[x]]) members.push_back(x);
  return subgroupFromMembers(phi.source, std::move(members));
}

Subgroup image(const Homomorphism& phi, const Subgroup& ofSource) {
  std::vector<Elt> members;
  members.reserve(ofSource.order());
  for (Elt m : ofSource.members()) members.push_back(phi.image[m]);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<Elt> gens;
  for (Elt t : ofSource.generators()) {
    const Elt y = phi.image[t];
    if (y != kIdentity && std::find(gens.begin(), gens.end(), y) == gens.end()) gens.push_back(y);
  }
  return Subgroup(phi.target, std::move(members), std::move(gens));
}

// --- standalone subgroup re-enumeration -------------------------------------

namespace {

class SubgroupOracle final : public MultOracle {
public:
  explicit SubgroupOracle(GroupPtr parent) : parent_(std::move(parent)) {}
  Payload identity() const override { return {kIdentity}; }
  Payload multiply(const Payload& a, const Payload& b) const override {
    return {parent_->mult(a[0], b[0])};
  }
  Backend backend() const override { return Backend::SubgroupOfParent; }

private:
  GroupPtr parent_;
};

}  // namespace

Elt EmbeddedGroup::fromParent(Elt parentIdx) const { return fromParentMap[parentIdx]; }

EmbeddedGroup asStandaloneGroup(GroupPtr g, const Subgroup& s) {
  SubgroupOracle oracle(g);
  std::vector<Payload> gens;
  gens.reserve(s.generators().size());
  for (Elt t : s.generators()) gens.push_back({t});
  auto sub = Group::enumerate(oracle, gens, s.order(), true,
                              g->description() + ".sub" + std::to_string(s.order()));
  if (sub->order() != s.order())
    throw Error(ErrorCode::InvalidArgument, "subgroup generators do not span the member set");
  EmbeddedGroup emb;
  emb.toParent.reserve(sub->order());
  for (Elt i = 0; i < sub->order(); ++i) emb.toParent.push_back(sub->payloads()[i][0]);
  emb.fromParentMap.assign(g->order(), kNoElt);
  for (Elt i = 0; i < sub->order(); ++i) emb.fromParentMap[emb.toParent[i]] = i;
  emb.group = std::move(sub);
  return emb;
}

// --- products ----------------------------------------------------------------

namespace {

class DirProdOracle final : public MultOracle {
public:
  DirProdOracle(GroupPtr a, GroupPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Payload identity() const override { return {kIdentity, kIdentity}; }
  Payload multiply(const Payload& x, const Payload& y) const override {
    return {a_->mult(x[0], y[0]), b_->mult(x[1], y[1])};
  }
  Backend backend() const override { return Backend::TupleProduct; }

private:
  GroupPtr a_, b_;
};

class SemidirectOracle final : public MultOracle {
public:
  SemidirectOracle(GroupPtr k, GroupPtr h, std::vector<std::vector<Elt>> actionByH)
      : k_(std::move(k)), h_(std::move(h)), actionByH_(std::move(actionByH)) {}
  Payload identity() const override { return {kIdentity, kIdentity}; }
  Payload multiply(const Payload& x, const Payload& y) const override {
    return {k_->mult(x[0], actionByH_[x[1]][y[0]]), h_->mult(x[1], y[1])};
  }
  Backend backend() const override { return Backend::TupleProduct; }

private:
  GroupPtr k_, h_;
  std::vector<std::vector<Elt>> actionByH_;  // per H element, full table on K
};

class WreathOracle final : public MultOracle {
public:
  WreathOracle(GroupPtr a, GroupPtr b) : a_(std::move(a)), b_(std::move(b)), nb_(b_->order()) {}
  Payload identity() const override { return Payload(nb_ + 1, kIdentity); }
  Payload multiply(const Payload& x, const Payload& y) const override {
    Payload r(nb_ + 1);
    const Elt b1 = x[nb_];
    for (Elt t = 0; t < nb_; ++t) r[t] = a_->mult(x[t], y[b_->mult(t, b1)]);
    r[nb_] = b_->mult(b1, y[nb_]);
    return r;
  }
  Backend backend() const override { return Backend::TupleProduct; }

private:
  GroupPtr a_, b_;
  std::uint32_t nb_;
};

class VectorAddOracle final : public MultOracle {
public:
  explicit VectorAddOracle(std::vector<std::uint32_t> mods) : mods_(std::move(mods)) {}
  Payload identity() const override { return Payload(mods_.size(), 0); }
  Payload multiply(const Payload& a, const Payload& b) const override {
    Payload r(mods_.size());
    for (std::size_t i = 0; i < mods_.size(); ++i) r[i] = (a[i] + b[i]) % mods_[i];
    return r;
  }
  Backend backend() const override { return Backend::TupleProduct; }

private:
  std::vector<std::uint32_t> mods_;
};

class PermOracle final : public MultOracle {
public:
  explicit PermOracle(std::uint32_t degree) : degree_(degree) {}
  Payload identity() const override {
    Payload p(degree_);
    std::iota(p.begin(), p.end(), 0);
    return p;
  }
  Payload multiply(const Payload& a, const Payload& b) const override {
    Payload r(degree_);
    for (std::uint32_t i = 0; i < degree_; ++i) r[i] = a[b[i]];
    return r;
  }
  Backend backend() const override { return Backend::Permutation; }

private:
  std::uint32_t degree_;
};

}  // namespace

GroupPtr dirProd(GroupPtr a, GroupPtr b, std::uint64_t maxOrder) {
  const std::uint64_t expect = static_cast<std::uint64_t>(a->order()) * b->order();
  if (expect > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "direct product exceeds size cap");
  DirProdOracle oracle(a, b);
  std::vector<Payload> gens;
  for (Elt g : a->generators()) gens.push_back({g, kIdentity});
  for (Elt g : b->generators()) gens.push_back({kIdentity, g});
  auto prod = Group::enumerate(oracle, gens, maxOrder, true,
                               "(" + a->description() + ")x(" + b->description() + ")");
  if (prod->order() != expect) throw Error(ErrorCode::InvalidArgument, "direct product enumeration mismatch");
  return prod;
}

std::vector<Elt> automorphismFromGenImages(GroupPtr k, const std::vector<Elt>& genImages) {
  auto phi = Homomorphism::fromGeneratorImages(k, k, genImages);
  if (!phi.isSurjective()) throw Error(ErrorCode::InvalidAction, "generator images define a non-bijective map");
  return phi.image;
}

GroupPtr semidirect(GroupPtr k, GroupPtr h, const std::vector<std::vector<Elt>>& actionOfHGenerators,
                    std::uint64_t maxOrder) {
  const std::uint64_t expect = static_cast<std::uint64_t>(k->order()) * h->order();
  if (expect > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "semidirect product exceeds size cap");
  if (actionOfHGenerators.size() != h->generators().size())
    throw Error(ErrorCode::InvalidAction, "one automorphism per H generator required");
  for (const auto& table : actionOfHGenerators) {
    if (table.size() != k->order()) throw Error(ErrorCode::InvalidAction, "automorphism table size mismatch");
    std::vector<std::uint8_t> seen(k->order(), 0);
    for (Elt y : table) {
      if (y >= k->order() || seen[y]) throw Error(ErrorCode::InvalidAction, "action image is not a bijection");
      seen[y] = 1;
    }
    // multiplicativity, checked on generator * element pairs
    for (std::size_t i = 0; i < k->generators().size(); ++i) {
      auto lt = k->leftTable(i);
      for (Elt x = 0; x < k->order(); ++x)
        if (table[lt[x]] != k->mult(table[k->generators()[i]], table[x]))
          throw Error(ErrorCode::InvalidAction, "action image is not an automorphism");
    }
  }
  // Materialize the action for every H element by walking generator words;
  // verify it is a homomorphism H -> Aut(K) along the way.
  std::vector<std::vector<Elt>> actionByH(h->order());
  {
    std::vector<Elt> id(k->order());
    std::iota(id.begin(), id.end(), 0);
    actionByH[kIdentity] = id;
  }
  for (Elt x = 0; x < h->order(); ++x) {
    if (x == kIdentity) continue;
    const auto& gTab = actionOfHGenerators[h->genOrdinalOf(x)];
    const auto& pTab = actionByH[h->parentOf(x)];
    auto& tab = actionByH[x];
    tab.resize(k->order());
    for (Elt e = 0; e < k->order(); ++e) tab[e] = gTab[pTab[e]];
  }
  for (std::size_t i = 0; i < h->generators().size(); ++i) {
    auto lt = h->leftTable(i);
    for (Elt x = 0; x < h->order(); ++x) {
      const auto& lhs = actionByH[lt[x]];
      const auto& gTab = actionOfHGenerators[i];
      const auto& xTab = actionByH[x];
      for (Elt e = 0; e < k->order(); ++e) {
        if (lhs[e] != gTab[xTab[e]])
          throw Error(ErrorCode::InvalidAction, "generator actions do not extend to a homomorphism into Aut(K)");
      }
    }
  }
  SemidirectOracle oracle(k, h, std::move(actionByH));
  std::vector<Payload> gens;
  for (Elt g : k->generators()) gens.push_back({g, kIdentity});
  for (Elt g : h->generators()) gens.push_back({kIdentity, g});
  auto prod = Group::enumerate(oracle, gens, maxOrder, true,
                               "(" + k->description() + ")x|(" + h->description() + ")");
  if (prod->order() != expect)
    throw Error(ErrorCode::InvalidAction, "semidirect enumeration mismatch");
  return prod;
}

GroupPtr wreathRegular(GroupPtr a, GroupPtr b, std::uint64_t maxOrder) {
  long double est = b->order();
  for (std::uint32_t i = 0; i < b->order(); ++i) {
    est *= a->order();
    if (est > static_cast<long double>(maxOrder))
      throw Error(ErrorCode::SizeCapExceeded, "wreath product exceeds size cap");
  }
  WreathOracle oracle(a, b);
  std::vector<Payload> gens;
  for (Elt g : a->generators()) {
    Payload p(b->order() + 1, kIdentity);
    p[0] = g;
    gens.push_back(std::move(p));
  }
  for (Elt g : b->generators()) {
    Payload p(b->order() + 1, kIdentity);
    p[b->order()] = g;
    gens.push_back(std::move(p));
  }
  auto w = Group::enumerate(oracle, gens, maxOrder, true,
                            "(" + a->description() + ")wr(" + b->description() + ")");
  std::uint64_t expect = b->order();
  for (std::uint32_t i = 0; i < b->order(); ++i) expect *= a->order();
  if (w->order() != expect) throw Error(ErrorCode::InvalidArgument, "wreath enumeration mismatch");
  return w;
}

GroupPtr pullback(const Homomorphism& f, const Homomorphism& g, std::uint64_t maxOrder) {
  if (f.target != g.target)
    throw Error(ErrorCode::IncompatibleCodomain, "pullback requires a shared codomain instance");
  auto prod = dirProd(f.source, g.source, maxOrder);
  std::vector<Elt> members;
  for (Elt i = 0; i < prod->order(); ++i) {
    const auto& pay = prod->payloads()[i];
    if (f.image[pay[0]] == g.image[pay[1]]) members.push_back(i);
  }
  auto sub = subgroupFromMembers(prod, std::move(members));
  auto emb = asStandaloneGroup(prod, sub);
  return emb.group;
}

GroupPtr cyclicGroup(std::uint32_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cyclic(0)");
  VectorAddOracle oracle({n});
  std::vector<Payload> gens;
  if (n > 1) gens.push_back({1});
  return Group::enumerate(oracle, gens, n, false, "cyclic(" + std::to_string(n) + ")");
}

GroupPtr elementaryAbelian(std::uint32_t p, std::uint32_t rank) {
  std::vector<std::uint32_t> mods(rank, p);
  VectorAddOracle oracle(mods);
  std::vector<Payload> gens;
  for (std::uint32_t i = 0; i < rank; ++i) {
    Payload e(rank, 0);
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < rank; ++i) n *= p;
  return Group::enumerate(oracle, gens, n, false,
                          "elemabelian(" + std::to_string(p) + "," + std::to_string(rank) + ")");
}

GroupPtr abelianGroup(const std::vector<std::uint32_t>& cyclicOrders, std::uint64_t maxOrder) {
  if (cyclicOrders.empty()) return cyclicGroup(1);
  std::uint64_t n = 1;
  for (auto e : cyclicOrders) {
    if (e == 0) throw Error(ErrorCode::InvalidArgument, "abelian factor of order 0");
    n *= e;
    if (n > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "abelian group exceeds size cap");
  }
  VectorAddOracle oracle(cyclicOrders);
  std::vector<Payload> gens;
  for (std::size_t i = 0; i < cyclicOrders.size(); ++i) {
    if (cyclicOrders[i] == 1) continue;
    Payload e(cyclicOrders.size(), 0);
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  std::string desc = "abelian(";
  for (std::size_t i = 0; i < cyclicOrders.size(); ++i)
    desc += (i ? "," : "") + std::to_string(cyclicOrders[i]);
  desc += ")";
  return Group::enumerate(oracle, gens, n, false, desc);
}

GroupPtr permutationGroup(const std::vector<std::vector<std::uint32_t>>& genImages, std::uint64_t maxOrder) {
  if (genImages.empty()) throw Error(ErrorCode::MalformedExpr, "permutation group needs generators");
  const std::uint32_t degree = static_cast<std::uint32_t>(genImages[0].size());
  std::vector<Payload> gens;
  for (const auto& img : genImages) {
    if (img.size() != degree) throw Error(ErrorCode::MalformedExpr, "permutation degree mismatch");
    std::vector<std::uint8_t> seen(degree, 0);
    for (auto v : img) {
      if (v >= degree || seen[v]) throw Error(ErrorCode::MalformedExpr, "not a permutation");
      seen[v] = 1;
    }
    gens.push_back(Payload(img.begin(), img.end()));
  }
  PermOracle oracle(degree);
  return Group::enumerate(oracle, gens, maxOrder, false, "perm(degree=" + std::to_string(degree) + ")");
}

// --- diagnostics --------------------------------------------------------------

bool groupSelfCheck(const GroupPtr& g, std::uint64_t seed) {
  const std::uint32_t n = g->order();
  for (Elt x = 0; x < n; ++x) {
    if (g->mult(kIdentity, x) != x || g->mult(x, kIdentity) != x) return false;
    if (g->mult(x, g->inverse(x)) != kIdentity || g->mult(g->inverse(x), x) != kIdentity) return false;
  }
  auto check = [&](Elt a, Elt b, Elt c) { return g->mult(g->mult(a, b), c) == g->mult(a, g->mult(b, c)); };
  if (n <= 100) {
    for (Elt a = 0; a < n; ++a)
      for (Elt b = 0; b < n; ++b)
        for (Elt c = 0; c < n; ++c)
          if (!check(a, b, c)) return false;
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<Elt> dist(0, n - 1);
    for (int i = 0; i < 100000; ++i)
      if (!check(dist(rng), dist(rng), dist(rng))) return false;
  }
  ClosureBuilder cb(g);
  cb.addAll(g->generators());
  return cb.size() == n;
}

// --- isomorphism testing -------------------------------------------------------

namespace {

struct GroupProfile {
  std::uint32_t order;
  std::map<std::uint32_t, std::uint32_t> orderHistogram;
  std::uint32_t centerOrder;
  std::uint32_t derivedOrder;
  std::vector<std::uint32_t> lowerCentralOrders;
  std::vector<std::uint32_t> omegaOrders;  // per prime power layer, all primes dividing order
  std::vector<std::uint32_t> agemoOrders;
};

GroupProfile profileOf(const GroupPtr& g) {
  GroupProfile pr;
  pr.order = g->order();
  for (Elt x = 0; x < g->order(); ++x) pr.orderHistogram[g->elementOrder(x)]++;
  pr.centerOrder = center(g).order();
  Subgroup gamma = derivedSubgroup(g);
  pr.derivedOrder = gamma.order();
  while (true) {
    pr.lowerCentralOrders.push_back(gamma.order());
    Subgroup next = commutator(g, gamma, wholeSubgroup(g));
    if (next.sameAs(gamma)) break;
    gamma = next;
  }
  for (auto [p, e] : g->orderFactorization()) {
    (void)e;
    for (std::uint32_t i = 1; i <= 2; ++i) {
      std::uint64_t pi = 1;
      for (std::uint32_t t = 0; t < i; ++t) pi *= p;
      ClosureBuilder om(g);
      for (Elt x = 0; x < g->order(); ++x)
        if (g->elementOrder(x) <= pi && pi % g->elementOrder(x) == 0) om.addGenerator(x);
      pr.omegaOrders.push_back(static_cast<std::uint32_t>(om.size()));
      ClosureBuilder ag(g);
      for (Elt x = 0; x < g->order(); ++x) ag.addGenerator(g->power(x, static_cast<std::int64_t>(pi)));
      pr.agemoOrders.push_back(static_cast<std::uint32_t>(ag.size()));
    }
  }
  return pr;
}

struct IsoSearch {
  GroupPtr p, q;
  std::vector<Elt> gensP;
  std::vector<std::vector<Elt>> stageMembers;  // members of <g_0..g_{level-1}> in BFS order
  std::vector<std::vector<Elt>> candidates;
  std::vector<Elt> phi;       // partial map, kNoElt = unset
  std::vector<Elt> phiUndo;   // stack of set positions
  std::vector<std::uint8_t> usedQ;
  std::vector<Elt> usedUndo;
  std::uint64_t budget;
  bool exhausted = false;

  bool extend(std::size_t level, Elt himg, std::size_t& undoMarkPhi, std::size_t& undoMarkUsed) {
    // Extend phi over stageMembers[level+1] and verify multiplicativity on
    // every (generator, element) edge inside the stage subgroup.
    undoMarkPhi = phiUndo.size();
    undoMarkUsed = usedUndo.size();
    const auto& stage = stageMembers[level + 1];
    std::vector<Elt> himgs;
    for (std::size_t j = 0; j <= level; ++j)
      himgs.push_back(j < level ? phi[gensP[j]] : himg);
    // BFS over the stage subgroup using generators g_0..g_level.
    std::vector<Elt> queue{kIdentity};
    std::vector<std::uint8_t> inStage(p->order(), 0);
    for (Elt m : stage) inStage[m] = 1;
    std::vector<std::uint8_t> visited(p->order(), 0);
    visited[kIdentity] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Elt x = queue[head];
      for (std::size_t j = 0; j <= level; ++j) {
        const Elt y = p->mult(gensP[j], x);
        const Elt img = q->mult(himgs[j], phi[x]);
        if (phi[y] == kNoElt) {
          if (usedQ[img]) return false;  // not injective
          phi[y] = img;
          phiUndo.push_back(y);
          usedQ[img] = 1;
          usedUndo.push_back(img);
        } else if (phi[y] != img) {
          return false;  // not multiplicative
        }
        if (!visited[y]) {
          visited[y] = 1;
          queue.push_back(y);
        }
      }
    }
    return queue.size() == stage.size();
  }

  void rollback(std::size_t undoMarkPhi, std::size_t undoMarkUsed) {
    while (phiUndo.size() > undoMarkPhi) {
      phi[phiUndo.back()] = kNoElt;
      phiUndo.pop_back();
    }
    while (usedUndo.size() > undoMarkUsed) {
      usedQ[usedUndo.back()] = 0;
      usedUndo.pop_back();
    }
  }

  bool dfs(std::size_t level) {
    if (level == gensP.size()) return true;
    for (Elt cand : candidates[level]) {
      if (budget == 0) {
        exhausted = true;
        return false;
      }
      --budget;
      if (usedQ[cand]) continue;
      std::size_t mPhi, mUsed;
      const bool ok = extend(level, cand, mPhi, mUsed);
      if (ok) {
        if (dfs(level + 1)) return true;
        if (exhausted) {
          rollback(mPhi, mUsed);
          return false;
        }
      }
      rollback(mPhi, mUsed);
    }
    return false;
  }
};

}  // namespace

IsoResult isIsomorphic(GroupPtr p, GroupPtr q, std::uint64_t budget) {
  if (p->order() != q->order()) return {IsoResult::Verdict::No, std::nullopt};
  const GroupProfile pp = profileOf(p);
  const GroupProfile pq = profileOf(q);
  if (pp.orderHistogram != pq.orderHistogram || pp.centerOrder != pq.centerOrder ||
      pp.derivedOrder != pq.derivedOrder || pp.lowerCentralOrders != pq.lowerCentralOrders ||
      pp.omegaOrders != pq.omegaOrders || pp.agemoOrders != pq.agemoOrders)
    return {IsoResult::Verdict::No, std::nullopt};

  IsoSearch search;
  search.p = p;
  search.q = q;
  search.budget = budget;

  // Greedy minimal generating sequence for p, with the member chain per stage.
  {
    ClosureBuilder cb(p);
    search.stageMembers.push_back(cb.membersUnsorted());
    for (Elt x = 0; x < p->order(); ++x) {
      if (!cb.contains(x)) {
        cb.addGenerator(x);
        search.gensP.push_back(x);
        search.stageMembers.push_back(cb.membersUnsorted());
      }
    }
  }

  // Candidate images, filtered by element order (and centralizer order on
  // small groups).
  const bool useCentralizers = q->order() <= 4096;
  std::vector<std::uint32_t> qCentSize;
  auto centSizeQ = [&](Elt x) {
    std::uint32_t c = 0;
    for (Elt y = 0; y < q->order(); ++y)
      if (q->mult(x, y) == q->mult(y, x)) ++c;
    return c;
  };
  auto centSizeP = [&](Elt x) {
    std::uint32_t c = 0;
    for (Elt y = 0; y < p->order(); ++y)
      if (p->mult(x, y) == p->mult(y, x)) ++c;
    return c;
  };
  for (Elt gp : search.gensP) {
    std::vector<Elt> cands;
    const std::uint32_t ord = p->elementOrder(gp);
    const std::uint32_t cs = useCentralizers ? centSizeP(gp) : 0;
    for (Elt y = 0; y < q->order(); ++y) {
      if (q->elementOrder(y) != ord) continue;
      if (useCentralizers && centSizeQ(y) != cs) continue;
      cands.push_back(y);
    }
    search.candidates.push_back(std::move(cands));
  }

  search.phi.assign(p->order(), kNoElt);
  search.phi[kIdentity] = kIdentity;
  search.usedQ.assign(q->order(), 0);
  search.usedQ[kIdentity] = 1;

  if (search.dfs(0)) {
    Homomorphism iso{p, q, search.phi};
    return {IsoResult::Verdict::Yes, std::move(iso)};
  }
  if (search.exhausted) return {IsoResult::Verdict::Inconclusive, std::nullopt};
  return {IsoResult::Verdict::No, std::nullopt};
}

}  // namespace pclab
