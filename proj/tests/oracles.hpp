#pragma once

// Reference computations used to cross-check the library. They deliberately
// take a different route from the code under test.

#include "wreathdp/laurent.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using wreathdp::Integer;
using wreathdp::LaurentPoly;
using wreathdp::Monomial;

/// Generalized binomial e(e-1)...(e-j+1)/j!, valid for negative e.
inline Integer gbinom(std::int64_t e, std::int64_t j) {
  Integer num = 1, den = 1;
  for (std::int64_t r = 0; r < j; ++r) {
    num *= Integer(e - r);
    den *= Integer(r + 1);
  }
  return num / den;
}

/// Coefficient of y^beta in p(1 + y), read as a power series. Every a^e is
/// expanded as (1 + y)^e without clearing denominators first.
inline Integer taylor_coefficient(const LaurentPoly& p, const Monomial& beta) {
  Integer sum = 0;
  for (const auto& [e, c] : p.terms()) {
    Integer t = c;
    for (std::size_t i = 0; i < e.size() && t != 0; ++i) t *= gbinom(e[i], beta[i]);
    sum += t;
  }
  return sum;
}

inline void all_exponents(std::size_t rank, std::int64_t total, Monomial& cur, std::size_t i,
                          std::vector<Monomial>& out) {
  if (i + 1 == rank) {
    cur[i] = total;
    out.push_back(cur);
    return;
  }
  for (std::int64_t v = 0; v <= total; ++v) {
    cur[i] = v;
    all_exponents(rank, total - v, cur, i + 1, out);
  }
}

/// Smallest degree carrying a nonzero Taylor coefficient at a = 1, searched up
/// to `limit`. Nothing found means p is zero as long as p is nonzero with
/// small exponents, which callers ensure.
inline std::optional<std::size_t> taylor_valuation(const LaurentPoly& p, std::size_t limit = 16) {
  if (p.is_zero()) return std::nullopt;
  for (std::size_t k = 0; k <= limit; ++k) {
    std::vector<Monomial> exps;
    Monomial cur(p.rank());
    all_exponents(p.rank(), static_cast<std::int64_t>(k), cur, 0, exps);
    for (const auto& beta : exps) {
      if (taylor_coefficient(p, beta) != 0) return k;
    }
  }
  return limit + 1;
}

/// (a_i - 1)^k by repeated multiplication.
inline LaurentPoly a_minus_one_pow(std::size_t rank, std::size_t i, std::size_t k) {
  LaurentPoly r = LaurentPoly::one(rank);
  const LaurentPoly f = LaurentPoly::variable(rank, i) - LaurentPoly::one(rank);
  for (std::size_t j = 0; j < k; ++j) r = r * f;
  return r;
}

inline Integer choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  return gbinom(n, k);
}

}  // namespace oracle
