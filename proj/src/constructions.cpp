#include "pclab/constructions.hpp"

#include <algorithm>

#include "pclab/sylow.hpp"

namespace pclab {

bool isPrime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t multiplicativeOrderMod(std::uint32_t a, std::uint32_t modulus) {
  std::uint64_t acc = a % modulus;
  if (std::gcd(acc, static_cast<std::uint64_t>(modulus)) != 1)
    throw Error(ErrorCode::InvalidArgument, "not a unit");
  std::uint32_t ord = 1;
  while (acc != 1) {
    acc = acc * a % modulus;
    ++ord;
  }
  return ord;
}

namespace {

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

class SL2Oracle final : public MultOracle {
public:
  explicit SL2Oracle(std::uint32_t modulus) : m_(modulus) {}
  Payload identity() const override { return {1, 0, 0, 1}; }
  Payload multiply(const Payload& a, const Payload& b) const override {
    return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[0]) * b[0] + static_cast<std::uint64_t>(a[1]) * b[2]) % m_),
            static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[0]) * b[1] + static_cast<std::uint64_t>(a[1]) * b[3]) % m_),
            static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[2]) * b[0] + static_cast<std::uint64_t>(a[3]) * b[2]) % m_),
            static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[2]) * b[1] + static_cast<std::uint64_t>(a[3]) * b[3]) % m_)};
  }
  Backend backend() const override { return Backend::MatrixModPn; }

private:
  std::uint32_t m_;
};

std::uint32_t invModPrimePower(std::uint32_t a, std::uint32_t p, std::uint32_t n) {
  const std::uint32_t m = static_cast<std::uint32_t>(ipow(p, n));
  const std::uint32_t phi = m / p * (p - 1);
  std::uint64_t acc = 1, base = a % m;
  std::uint32_t e = phi - 1;
  while (e) {
    if (e & 1) acc = acc * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

}  // namespace

GroupPtr matrixGroupSL2(std::uint32_t p, std::uint32_t n, std::uint64_t maxOrder) {
  if (!isPrime(p) || n < 1) throw Error(ErrorCode::InvalidPrimes, "sl2zmod requires a prime and n >= 1");
  const std::uint64_t modulus = ipow(p, n);
  if (modulus > 0xFFFF) throw Error(ErrorCode::SizeCapExceeded, "sl2zmod modulus too large");
  const std::uint64_t expect = ipow(p, 3 * n - 2) * (static_cast<std::uint64_t>(p) * p - 1);
  if (expect > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "sl2zmod exceeds size cap");
  SL2Oracle oracle(static_cast<std::uint32_t>(modulus));
  auto g = Group::enumerate(oracle, {{1, 1, 0, 1}, {1, 0, 1, 1}}, maxOrder, true,
                            "sl2zmod(" + std::to_string(p) + "," + std::to_string(n) + ")");
  if (g->order() != expect)
    throw Error(ErrorCode::InvalidArgument, "sl2zmod enumeration mismatch (internal)");
  return g;
}

Subgroup congruenceKernel(GroupPtr sl2, std::uint32_t p, std::uint32_t m) {
  const std::uint64_t pm = ipow(p, m);
  std::vector<Elt> members;
  for (Elt x = 0; x < sl2->order(); ++x) {
    const Payload& a = sl2->payloads()[x];
    if (a[0] % pm == 1 && a[1] % pm == 0 && a[2] % pm == 0 && a[3] % pm == 1) members.push_back(x);
  }
  return subgroupFromMembers(std::move(sl2), std::move(members));
}

SL2WithSylow buildSL2ZmodAndSylow(std::uint32_t p, std::uint32_t n, std::uint64_t maxOrder) {
  auto g = matrixGroupSL2(p, n, maxOrder);
  Subgroup syl = sylowSubgroup(g, p);
  return {std::move(g), std::move(syl)};
}

GroupPtr sylowSL2Standalone(std::uint32_t p, std::uint32_t n, std::uint64_t maxOrder) {
  if (!isPrime(p) || n < 1) throw Error(ErrorCode::InvalidPrimes, "sylsl2zmod requires a prime and n >= 1");
  const std::uint64_t modulus = ipow(p, n);
  if (modulus > 0xFFFF) throw Error(ErrorCode::SizeCapExceeded, "sylsl2zmod modulus too large");
  const std::uint64_t expect = ipow(p, 3 * n - 2);
  if (expect > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "sylsl2zmod exceeds size cap");
  SL2Oracle oracle(static_cast<std::uint32_t>(modulus));
  std::vector<Payload> gens{{1, 1, 0, 1}};
  if (n >= 2) {
    gens.push_back({1, 0, p, 1});
    const std::uint32_t u = static_cast<std::uint32_t>((1 + p) % modulus);
    gens.push_back({u, 0, 0, invModPrimePower(u, p, n)});
  }
  auto g = Group::enumerate(oracle, gens, maxOrder, true,
                            "sylsl2zmod(" + std::to_string(p) + "," + std::to_string(n) + ")");
  if (g->order() != expect)
    throw Error(ErrorCode::InvalidArgument, "sylsl2zmod generators span a wrong order (internal)");
  return g;
}

GroupPtr heisenberg(std::uint32_t p, std::uint64_t maxOrder) {
  if (!isPrime(p) || p == 2) throw Error(ErrorCode::InvalidPrimes, "heisenberg requires an odd prime");
  auto k = elementaryAbelian(p, 2);
  auto h = cyclicGroup(p);
  const Elt x = k->generators()[0];
  const Elt z = k->generators()[1];
  auto action = automorphismFromGenImages(k, {k->mult(x, z), z});
  return semidirect(k, h, {action}, maxOrder);
}

GroupPtr modularP3(std::uint32_t p, std::uint64_t maxOrder) {
  if (!isPrime(p) || p == 2) throw Error(ErrorCode::InvalidPrimes, "modularp3 requires an odd prime");
  auto k = cyclicGroup(p * p);
  auto h = cyclicGroup(p);
  auto action = automorphismFromGenImages(k, {k->power(k->generators()[0], 1 + p)});
  return semidirect(k, h, {action}, maxOrder);
}

WreathWithBeta wreathCpCpWithBeta(std::uint32_t p, std::uint64_t maxOrder) {
  auto a = cyclicGroup(p);
  auto w = wreathRegular(a, a, maxOrder);
  // generators: the base copy at the identity coordinate, then the top cycle
  std::vector<Elt> genImages{kIdentity, a->generators()[0]};
  auto beta = Homomorphism::fromGeneratorImages(w, a, genImages);
  if (!beta.isSurjective())
    throw Error(ErrorCode::InvalidArgument, "beta is not surjective (internal)");
  return {std::move(w), std::move(a), std::move(beta)};
}

GroupPtr buildYpm(std::uint32_t p, std::uint32_t m, std::uint64_t maxOrder) {
  if (!isPrime(p) || p == 2 || m < 1) throw Error(ErrorCode::InvalidPrimes, "ypm requires odd p, m >= 1");
  auto wb = wreathCpCpWithBeta(p, maxOrder);
  auto cpm = cyclicGroup(static_cast<std::uint32_t>(ipow(p, m)));
  auto pi = Homomorphism::fromGeneratorImages(cpm, wb.top, {wb.top->generators()[0]});
  auto y = pullback(pi, wb.beta, maxOrder);
  const std::uint64_t expect = ipow(p, p + m);
  if (y->order() != expect) throw Error(ErrorCode::InvalidArgument, "ypm order mismatch (internal)");
  return y;
}

namespace {

// PL(M) elements are matrices B = I + p.alpha acting on M = sum Z/p^{e_i};
// entry (i, j) is stored mod p^{e_i} and must be divisible by
// p^{max(0, e_i - e_j)} to be a well-defined homomorphism component.
class PLOracle final : public MultOracle {
public:
  PLOracle(std::uint32_t p, std::vector<std::uint32_t> exponents) : p_(p), e_(std::move(exponents)) {
    r_ = e_.size();
    mods_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i) mods_[i] = ipow(p_, e_[i]);
  }
  Payload identity() const override {
    Payload id(r_ * r_, 0);
    for (std::size_t i = 0; i < r_; ++i) id[i * r_ + i] = 1;
    return id;
  }
  Payload multiply(const Payload& a, const Payload& b) const override {
    Payload c(r_ * r_, 0);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < r_; ++k) {
        if (!a[i * r_ + k]) continue;
        for (std::size_t j = 0; j < r_; ++j)
          c[i * r_ + j] = static_cast<std::uint32_t>(
              (c[i * r_ + j] + static_cast<std::uint64_t>(a[i * r_ + k]) * b[k * r_ + j]) % mods_[i]);
      }
    return c;
  }
  Backend backend() const override { return Backend::MatrixModPn; }

  std::size_t rank() const { return r_; }
  std::uint64_t mod(std::size_t i) const { return mods_[i]; }
  std::uint32_t exponent(std::size_t i) const { return e_[i]; }

private:
  std::uint32_t p_;
  std::vector<std::uint32_t> e_;
  std::vector<std::uint64_t> mods_;
  std::size_t r_;
};

}  // namespace

GroupPtr buildPL(std::uint32_t p, const std::vector<std::uint32_t>& cyclicOrders, std::uint64_t maxOrder) {
  if (!isPrime(p)) throw Error(ErrorCode::InvalidPrimes, "pl requires a prime");
  std::vector<std::uint32_t> exps;
  std::uint64_t expect = 1;
  for (auto m : cyclicOrders) {
    std::uint32_t e = 0;
    std::uint64_t v = m;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    if (v != 1 || e == 0) throw Error(ErrorCode::InvalidArgument, "pl factors must be powers of p");
    exps.push_back(e);
  }
  for (std::size_t i = 0; i < exps.size(); ++i)
    for (std::size_t j = 0; j < exps.size(); ++j) {
      const std::uint32_t mn = std::min(exps[i], exps[j]);
      if (mn >= 1) expect *= ipow(p, mn - 1);
      if (expect > maxOrder) throw Error(ErrorCode::SizeCapExceeded, "pl exceeds size cap");
    }
  PLOracle oracle(p, exps);
  const std::size_t r = exps.size();
  std::vector<Payload> gens;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const std::uint32_t vp = 1 + (exps[i] > exps[j] ? exps[i] - exps[j] : 0);
      if (vp >= exps[i]) continue;  // p^vp = 0 mod p^{e_i}
      Payload g = oracle.identity();
      g[i * r + j] = static_cast<std::uint32_t>((g[i * r + j] + ipow(p, vp)) % oracle.mod(i));
      gens.push_back(std::move(g));
    }
  std::string desc = "pl(" + std::to_string(p) + ";";
  for (std::size_t i = 0; i < cyclicOrders.size(); ++i)
    desc += (i ? "," : "") + std::to_string(cyclicOrders[i]);
  desc += ")";
  auto g = Group::enumerate(oracle, gens, maxOrder, true, desc);
  if (g->order() != expect) throw Error(ErrorCode::InvalidArgument, "pl enumeration mismatch (internal)");
  return g;
}

GroupPtr buildThmAFixture(std::uint32_t p, std::uint32_t q, std::uint64_t maxOrder) {
  if (!isPrime(p) || !isPrime(q) || p == 2 || q % p != 1)
    throw Error(ErrorCode::InvalidPrimes, "fixture requires odd primes with q = 1 mod p");
  std::uint32_t t = 0;
  for (std::uint32_t c = 2; c < q; ++c) {
    if (multiplicativeOrderMod(c, q) == p) {
      t = c;
      break;
    }
  }
  auto k = cyclicGroup(q);
  auto h = cyclicGroup(p * p);
  auto action = automorphismFromGenImages(k, {k->power(k->generators()[0], t)});
  return semidirect(k, h, {action}, maxOrder);
}

GroupPtr buildThmAFixtureHeight2(std::uint32_t p, std::uint32_t q, std::uint64_t maxOrder) {
  return dirProd(buildThmAFixture(p, q, maxOrder), heisenberg(p, maxOrder), maxOrder);
}

GroupPtr sandwichElemAbelianInv(std::uint32_t p, std::uint64_t maxOrder) {
  if (!isPrime(p) || p == 2) throw Error(ErrorCode::InvalidPrimes, "fixture requires an odd prime");
  auto k = elementaryAbelian(p, 2);
  auto h = cyclicGroup(2);
  auto action = automorphismFromGenImages(
      k, {k->inverse(k->generators()[0]), k->inverse(k->generators()[1])});
  return semidirect(k, h, {action}, maxOrder);
}

GroupPtr sandwichHeisenbergInv(std::uint32_t p, std::uint64_t maxOrder) {
  auto k = heisenberg(p, maxOrder);
  auto h = cyclicGroup(2);
  // x -> x^-1, z -> z, c -> c^-1 extends to an order-2 automorphism
  const auto& gens = k->generators();
  auto action = automorphismFromGenImages(
      k, {k->inverse(gens[0]), gens[1], k->inverse(gens[2])});
  return semidirect(k, h, {action}, maxOrder);
}

GroupPtr thmBTruncation(std::uint32_t p, std::uint32_t i, std::uint32_t s, std::uint64_t maxOrder) {
  if (!isPrime(p) || p == 2 || i < 1 || s < 1)
    throw Error(ErrorCode::InvalidPrimes, "truncation requires odd prime, i >= 1, s >= 1");
  const std::uint32_t ps = static_cast<std::uint32_t>(ipow(p, s));
  std::vector<std::uint32_t> mods(p - 1, ps);
  auto k = abelianGroup(mods, maxOrder);
  auto h = cyclicGroup(static_cast<std::uint32_t>(ipow(p, i + 1)));
  // companion action of multiplication by the group element a on Z[A]/Delta:
  // e_j -> e_{j+1}, e_{p-2} -> -(e_0 + ... + e_{p-2})
  std::vector<Elt> genImages;
  const auto& kg = k->generators();
  for (std::uint32_t j = 0; j + 1 < p - 1; ++j) genImages.push_back(kg[j + 1]);
  Elt sum = kIdentity;
  for (std::uint32_t j = 0; j < p - 1; ++j) sum = k->mult(sum, kg[j]);
  genImages.push_back(k->inverse(sum));
  auto action = automorphismFromGenImages(k, genImages);
  return semidirect(k, h, {action}, maxOrder);
}

}  // namespace pclab
