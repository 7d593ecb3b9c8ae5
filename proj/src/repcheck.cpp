#include "pclab/repcheck.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "pclab/series.hpp"
#include "pclab/sylow.hpp"

namespace pclab {

FpMatrixRep::FpMatrixRep(GroupPtr group, std::uint32_t p, std::vector<fp::Matrix> generatorMatrices)
    : group_(std::move(group)), p_(p), gen_(std::move(generatorMatrices)) {
  if (gen_.size() != group_->generators().size())
    throw Error(ErrorCode::InvalidArgument, "one matrix per group generator required");
  dim_ = gen_.empty() ? 0 : static_cast<std::uint32_t>(gen_[0].rows());
  for (const auto& m : gen_) {
    if (m.rows() != dim_ || m.cols() != dim_ || m.prime() != p_)
      throw Error(ErrorCode::InvalidArgument, "generator matrix shape mismatch");
    if (m.rank() != dim_) throw Error(ErrorCode::InvalidArgument, "generator matrix not invertible");
  }
}

const fp::Matrix& FpMatrixRep::matrixOf(Elt x) const {
  std::lock_guard lock(cacheMutex_);
  std::vector<Elt> chain;
  while (cache_.find(x) == cache_.end()) {
    if (x == kIdentity) {
      cache_.emplace(kIdentity, fp::Matrix::identity(dim_, p_));
      break;
    }
    chain.push_back(x);
    x = group_->parentOf(x);
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const fp::Matrix m = gen_[group_->genOrdinalOf(*it)] * cache_.at(group_->parentOf(*it));
    cache_.emplace(*it, m);
  }
  return cache_.at(chain.empty() ? x : chain.front());
}

std::vector<Elt> FpMatrixRep::kernelMembers() const {
  std::vector<Elt> ker;
  for (Elt x = 0; x < group_->order(); ++x)
    if (matrixOf(x).isIdentity()) ker.push_back(x);
  return ker;
}

bool FpMatrixRep::respectsMultiplication() const {
  for (std::size_t i = 0; i < gen_.size(); ++i) {
    auto table = group_->leftTable(i);
    for (Elt x = 0; x < group_->order(); ++x)
      if (!(matrixOf(table[x]) == gen_[i] * matrixOf(x))) return false;
  }
  return true;
}

FpMatrixRep conjugationModule(GroupPtr g, const Subgroup& omega, std::uint32_t p) {
  if (!omega.isNormal()) throw Error(ErrorCode::NotNormal, "conjugation module requires a normal subgroup");
  if (!omega.isPGroupSubgroup(p)) throw Error(ErrorCode::NotAPGroup, "conjugation module requires a p-subgroup");
  EmbeddedGroup emb = asStandaloneGroup(g, omega);
  SubgroupSeries lam = lambdaSeries(emb.group, p, 1);

  std::vector<FpLayer> layers;
  int last = lam.firstIndex;
  for (int n = lam.firstIndex; n <= lam.lastIndex(); ++n)
    if (!lam.termAt(n).sameAs(lam.termAt(n + 1))) last = n;
  for (int n = 1; n <= last; ++n)
    layers.push_back(buildLayer(emb.group, lam.termAt(n), lam.termAt(n + 1), p));

  std::uint32_t dim = 0;
  for (const auto& l : layers) dim += l.dim;
  if (dim == 0) dim = 0;

  std::vector<fp::Matrix> genMats;
  for (Elt gen : g->generators()) {
    fp::Matrix m(dim, dim, p);
    std::uint32_t off = 0;
    for (const auto& layer : layers) {
      for (std::uint32_t j = 0; j < layer.dim; ++j) {
        const Elt inParent = emb.toParent[layer.basis[j]];
        const Elt conj = g->conjugate(gen, inParent);
        const Elt inSub = emb.fromParent(conj);
        if (inSub == kNoElt)
          throw Error(ErrorCode::NotNormal, "conjugation leaves the subgroup (not normal)");
        const auto& c = layer.coordsOf(inSub);
        for (std::uint32_t r = 0; r < layer.dim; ++r) m.set(off + r, off + j, c[r]);
      }
      off += layer.dim;
    }
    genMats.push_back(std::move(m));
  }
  return FpMatrixRep(g, p, std::move(genMats));
}

std::vector<std::size_t> jordanBlockSizes(const fp::Matrix& a, std::uint32_t p) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "square matrix required");
  if (!a.pow(p).isIdentity())
    throw Error(ErrorCode::NotUnipotentOrderP, "matrix is not unipotent with A^p = I");
  const std::size_t d = a.rows();
  const fp::Matrix n = a - fp::Matrix::identity(d, a.prime());
  std::vector<std::size_t> ranks(p + 2, 0);
  fp::Matrix power = fp::Matrix::identity(d, a.prime());
  for (std::uint32_t j = 0; j <= p + 1; ++j) {
    ranks[j] = power.rank();
    power = power * n;
  }
  std::vector<std::size_t> sizes;
  for (std::size_t s = 1; s <= p; ++s) {
    const std::size_t count = ranks[s - 1] + ranks[s + 1] - 2 * ranks[s];
    for (std::size_t c = 0; c < count; ++c) sizes.push_back(s);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

bool nilpotencyDegreeAtMost(const fp::Matrix& a, std::uint32_t power) {
  const fp::Matrix n = a - fp::Matrix::identity(a.rows(), a.prime());
  return n.pow(power).isZero();
}

LemmaCritResult lemmaCritCheck(GroupPtr g, std::uint32_t p, const FpMatrixRep& rep) {
  if (p == 2) throw Error(ErrorCode::OddPrimeRequired, "criterion requires p odd");
  const Subgroup op = opCore(g, p);
  const std::vector<Elt> kernel = rep.kernelMembers();
  for (Elt x : kernel) {
    if (!op.contains(x)) return {LemmaCritResult::Status::HypothesisIFailed, false, false, x};
  }
  const Subgroup syl = sylowSubgroup(g, p);
  for (Elt x : syl.members()) {
    if (!nilpotencyDegreeAtMost(rep.matrixOf(x), p - 2))
      return {LemmaCritResult::Status::HypothesisIIFailed, false, false, x};
  }
  LemmaCritResult result{LemmaCritResult::Status::NormalSylowPredicted, false, false, std::nullopt};
  result.kernelEqualsSylow = (kernel == syl.members());
  result.sylowNormal = syl.isNormal();
  return result;
}

fp::Matrix loadMatrixFixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open fixture " + path);
  nlohmann::json j;
  in >> j;
  const std::size_t dim = j.at("dimension").get<std::size_t>();
  const std::uint32_t p = j.at("prime").get<std::uint32_t>();
  fp::Matrix m(dim, dim, p);
  const auto& rows = j.at("rows");
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m.set(r, c, rows.at(r).at(c).get<std::uint32_t>());
  return m;
}

void saveMatrixFixture(const std::string& path, const fp::Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  nlohmann::json j{{"dimension", m.rows()}, {"prime", m.prime()}, {"rows", std::move(rows)}};
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

bool moduleIsIrreducible(const FpMatrixRep& rep) {
  const std::uint32_t d = rep.dimension();
  const std::uint32_t p = rep.prime();
  if (d == 0) return false;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    total *= p;
    if (total > 2000000) throw Error(ErrorCode::CapExceeded, "irreducibility scan too large");
  }
  // every nonzero vector must generate the whole module
  std::vector<std::uint8_t> v(d, 0);
  auto nextVec = [&]() {
    for (std::uint32_t i = 0; i < d; ++i) {
      if (++v[i] < p) return true;
      v[i] = 0;
    }
    return false;
  };
  while (nextVec()) {
    fp::Matrix span(0, d, p);
    span.appendRow(v);
    std::vector<std::vector<std::uint8_t>> frontier{v};
    std::size_t rank = 1;
    while (!frontier.empty() && rank < d) {
      std::vector<std::vector<std::uint8_t>> next;
      for (const auto& w : frontier) {
        for (const auto& gm : rep.generatorMatrices()) {
          std::vector<std::uint8_t> img(d, 0);
          for (std::size_t r = 0; r < d; ++r) {
            std::uint32_t acc = 0;
            for (std::size_t c = 0; c < d; ++c) acc += gm(r, c) * w[c];
            img[r] = static_cast<std::uint8_t>(acc % p);
          }
          fp::Matrix trial = span;
          trial.appendRow(img);
          if (trial.rank() > rank) {
            span = std::move(trial);
            ++rank;
            next.push_back(std::move(img));
          }
        }
      }
      frontier = std::move(next);
    }
    if (rank < d) return false;
  }
  return true;
}

FpMatrixRep directSumRep(const FpMatrixRep& a, const FpMatrixRep& b) {
  if (a.group() != b.group() || a.prime() != b.prime())
    throw Error(ErrorCode::InvalidArgument, "direct sum requires matching group and prime");
  const std::uint32_t d = a.dimension() + b.dimension();
  std::vector<fp::Matrix> gens;
  for (std::size_t i = 0; i < a.generatorMatrices().size(); ++i) {
    fp::Matrix m(d, d, a.prime());
    const auto& ma = a.generatorMatrices()[i];
    const auto& mb = b.generatorMatrices()[i];
    for (std::size_t r = 0; r < ma.rows(); ++r)
      for (std::size_t c = 0; c < ma.cols(); ++c) m.set(r, c, ma(r, c));
    for (std::size_t r = 0; r < mb.rows(); ++r)
      for (std::size_t c = 0; c < mb.cols(); ++c) m.set(a.dimension() + r, a.dimension() + c, mb(r, c));
    gens.push_back(std::move(m));
  }
  return FpMatrixRep(a.group(), a.prime(), std::move(gens));
}

FpMatrixRep trivialRep(GroupPtr g, std::uint32_t p, std::uint32_t dim) {
  std::vector<fp::Matrix> gens(g->generators().size(), fp::Matrix::identity(dim, p));
  return FpMatrixRep(std::move(g), p, std::move(gens));
}

namespace {

// Polynomial arithmetic in F_p[x]/(g), g monic of degree d, coefficients
// little-endian.
struct QuotientField {
  std::uint32_t p;
  std::vector<std::uint32_t> g;  // monic modulus, degree d
  std::size_t d;

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a,
                                 const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> prod(2 * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (std::size_t i = 2 * d; i-- > d;) {
      const std::uint32_t c = prod[i];
      if (!c) continue;
      prod[i] = 0;
      for (std::size_t j = 0; j < d; ++j)
        prod[i - d + j] = (prod[i - d + j] + (p - c) * g[j] % p) % p;
    }
    prod.resize(d);
    return prod;
  }
  std::vector<std::uint32_t> pow(std::vector<std::uint32_t> base, std::uint64_t e) const {
    std::vector<std::uint32_t> acc(d, 0);
    acc[0] = 1;
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }
  bool isOne(const std::vector<std::uint32_t>& a) const {
    if (a[0] != 1) return false;
    for (std::size_t i = 1; i < d; ++i)
      if (a[i]) return false;
    return true;
  }
};

// Degree of a coefficient vector (little-endian), or -1 for zero.
int polyDegree(const std::vector<std::uint32_t>& a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i]) return static_cast<int>(i);
  return -1;
}

// gcd of two polynomials over F_p (little-endian coefficients).
std::vector<std::uint32_t> polyGcd(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
                                   std::uint32_t p) {
  while (polyDegree(b) >= 0) {
    // a mod b
    int db = polyDegree(b);
    const std::uint32_t leadInv = fp::invMod(b[db], p);
    for (int da = polyDegree(a); da >= db; da = polyDegree(a)) {
      const std::uint32_t c = a[da] * leadInv % p;
      for (int i = 0; i <= db; ++i)
        a[da - db + i] = (a[da - db + i] + (p - c) * b[i] % p) % p;
    }
    std::swap(a, b);
  }
  return a;
}

// Finds a monic irreducible polynomial of degree d over F_p by scanning
// coefficient vectors with Rabin's test.
std::vector<std::uint32_t> findIrreducible(std::uint32_t p, std::size_t d) {
  std::vector<std::uint32_t> coeffs(d, 0);
  auto next = [&]() {
    for (std::size_t i = 0; i < d; ++i) {
      if (++coeffs[i] < p) return true;
      coeffs[i] = 0;
    }
    return false;
  };
  std::vector<std::size_t> primeDivisors;
  {
    std::size_t m = d;
    for (std::size_t q = 2; q * q <= m; ++q) {
      if (m % q == 0) {
        primeDivisors.push_back(q);
        while (m % q == 0) m /= q;
      }
    }
    if (m > 1) primeDivisors.push_back(m);
  }
  for (;;) {
    if (!next()) throw Error(ErrorCode::InvalidArgument, "no irreducible polynomial found");
    if (d == 1) return coeffs;
    QuotientField f{p, coeffs, d};
    std::vector<std::uint32_t> x(d, 0);
    x[1] = 1;
    // x^(p^d) == x mod g
    auto xp = x;
    for (std::size_t e = 0; e < d; ++e) xp = f.pow(xp, p);
    if (xp != x) continue;
    // gcd(x^(p^(d/l)) - x, g) constant for every prime l | d
    bool irreducible = true;
    std::vector<std::uint32_t> modulus = coeffs;
    modulus.push_back(1);  // monic degree-d modulus
    for (std::size_t l : primeDivisors) {
      auto xq = x;
      for (std::size_t e = 0; e < d / l; ++e) xq = f.pow(xq, p);
      std::vector<std::uint32_t> diff = xq;
      diff[1] = (diff[1] + p - 1) % p;
      if (polyDegree(polyGcd(modulus, diff, p)) > 0) {
        irreducible = false;
        break;
      }
    }
    if (irreducible) return coeffs;
  }
}

}  // namespace

FrobeniusModuleFixture frobeniusModuleFixture(std::uint32_t p, std::uint32_t q,
                                              std::uint32_t frobPower, std::uint64_t maxOrder) {
  // d = order of p mod q
  std::size_t d = 1;
  {
    std::uint64_t acc = p % q;
    while (acc != 1) {
      acc = acc * p % q;
      ++d;
    }
  }
  // twist k = p^frobPower mod q must have multiplicative order p
  std::uint64_t k = 1;
  for (std::uint32_t i = 0; i < frobPower; ++i) k = k * p % q;
  {
    std::uint64_t acc = k % q, ord = 1;
    while (acc != 1) {
      acc = acc * k % q;
      ++ord;
    }
    if (ord != p) throw Error(ErrorCode::InvalidPrimes, "twist exponent does not have order p mod q");
  }
  if (d / std::gcd<std::size_t>(d, frobPower) != p)
    throw Error(ErrorCode::InvalidPrimes, "Frobenius power does not have order p");

  QuotientField f{p, findIrreducible(p, d), d};
  // an element of multiplicative order q
  std::uint64_t fieldOrder = 1;
  for (std::size_t i = 0; i < d; ++i) fieldOrder *= p;
  if ((fieldOrder - 1) % q != 0) throw Error(ErrorCode::InvalidPrimes, "q does not divide p^d - 1");
  std::vector<std::uint32_t> zeta;
  for (std::uint32_t trial = 1;; ++trial) {
    // candidate eta = x + trial
    std::vector<std::uint32_t> eta(d, 0);
    if (d == 1)
      eta[0] = trial % p;
    else {
      eta[1] = 1;
      eta[0] = trial % p;
    }
    auto cand = f.pow(eta, (fieldOrder - 1) / q);
    if (f.isOne(cand)) continue;
    if (!f.isOne(f.pow(cand, q))) continue;
    zeta = cand;
    break;
  }

  // C: multiplication by zeta on the basis 1, x, ..., x^{d-1}
  fp::Matrix c(d, d, p);
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<std::uint32_t> basis(d, 0);
    basis[col] = 1;
    auto img = f.mul(zeta, basis);
    for (std::size_t r = 0; r < d; ++r) c.set(r, col, img[r]);
  }
  // S: Frobenius^frobPower, a -> a^(p^frobPower)
  std::uint64_t pe = 1;
  for (std::uint32_t i = 0; i < frobPower; ++i) pe *= p;
  fp::Matrix s(d, d, p);
  for (std::size_t col = 0; col < d; ++col) {
    std::vector<std::uint32_t> basis(d, 0);
    basis[col] = 1;
    auto img = f.pow(basis, pe);
    for (std::size_t r = 0; r < d; ++r) s.set(r, col, img[r]);
  }
  if (!(s * c * s.inverse() == c.pow(k)))
    throw Error(ErrorCode::InvalidPrimes, "Frobenius twist relation failed");

  auto cq = cyclicGroup(q);
  auto cp = cyclicGroup(p);
  std::vector<Elt> genImage(cq->order());
  for (Elt x = 0; x < cq->order(); ++x) genImage[x] = static_cast<Elt>((static_cast<std::uint64_t>(x) * k) % q);
  auto grp = semidirect(cq, cp, {genImage}, maxOrder);
  FpMatrixRep rep(grp, p, {c, s});
  if (!rep.respectsMultiplication())
    throw Error(ErrorCode::InvalidArgument, "fixture representation is inconsistent (internal)");
  return {grp, std::move(rep), static_cast<std::uint32_t>(k)};
}

}  // namespace pclab
