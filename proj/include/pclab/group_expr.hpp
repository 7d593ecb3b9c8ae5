#pragma once

#include <string>

#include "pclab/group.hpp"

namespace pclab {

// Text grammar for group expressions, shared by the CLI and the catalog:
//
//   expr := cyclic(N) | elemabelian(P, R) | abelian(E1, ..., Ek)
//         | dirprod(expr, expr) | wreath(expr, expr)
//         | semidirectpow(expr, N, T)        K x| C_N, generator acts x -> x^T
//         | sylow(expr, P) | derived(expr) | center(expr)
//         | sl2zmod(P, N) | sl2f(P) | sylsl2zmod(P, N)
//         | ypm(P, M) | pl(P; E1, ..., Ek) | heisenberg(P) | modularp3(P)
//         | thmafixture(P, Q) | thmafixtureh2(P, Q)
//         | sandwichea(P) | sandwichheis(P) | thmbtrunc(P, I, S)
//         | perm("(1,2,3)(4,5)", "...")
//
// Whitespace is insignificant. Throws MalformedExpr on parse errors and
// SizeCapExceeded when evaluation passes maxOrder.
struct EvalOptions {
  std::uint64_t maxOrder = 1ull << 21;
};

GroupPtr evalExpr(const std::string& text, const EvalOptions& options = {});

}  // namespace pclab
