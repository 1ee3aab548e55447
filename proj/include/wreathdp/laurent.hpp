#pragma once

// Exact arithmetic in the integer group ring of a free abelian group of
// rank m, i.e. Laurent polynomials Z[a1^±1, ..., am^±1], together with the
// powers of the augmentation ideal (the ideal generated by a1-1, ..., am-1).

#include "wreathdp/cursor.hpp"
#include "wreathdp/errors.hpp"
#include "wreathdp/integer.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wreathdp {

/// Exponent vector of a monomial a1^e1 ... am^em. Exponents may be negative.
using Monomial = std::vector<std::int64_t>;

inline std::int64_t total_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), std::int64_t{0});
}

/// Degree-lexicographic order: total degree first, then lexicographic.
struct DegLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class LaurentPoly {
 public:
  using Terms = std::map<Monomial, Integer, DegLexLess>;

  explicit LaurentPoly(std::size_t rank) : rank_(rank) {}

  static LaurentPoly zero(std::size_t rank) { return LaurentPoly(rank); }

  static LaurentPoly constant(std::size_t rank, const Integer& c) {
    LaurentPoly p(rank);
    p.add_term(Monomial(rank, 0), c);
    return p;
  }

  static LaurentPoly one(std::size_t rank) { return constant(rank, 1); }

  static LaurentPoly monomial(Monomial exponents, const Integer& c = 1) {
    LaurentPoly p(exponents.size());
    p.add_term(std::move(exponents), c);
    return p;
  }

  /// The generator a_{i+1} (0-based index) raised to `power`.
  static LaurentPoly variable(std::size_t rank, std::size_t i,
                              std::int64_t power = 1) {
    if (i >= rank) throw UsageError("variable index out of range");
    Monomial e(rank, 0);
    e[i] = power;
    return monomial(std::move(e));
  }

  std::size_t rank() const noexcept { return rank_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Integer coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  /// Single term with coefficient +1 or -1, i.e. a unit of the ring.
  bool is_unit_monomial() const {
    return terms_.size() == 1 &&
           (terms_.begin()->second == 1 || terms_.begin()->second == -1);
  }

  /// Adds c * a^m in place, keeping the no-zero-coefficient invariant.
  void add_term(Monomial m, const Integer& c) {
    if (m.size() != rank_) throw UsageError("monomial rank mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& q) {
    require_same_rank(q);
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }

  LaurentPoly& operator-=(const LaurentPoly& q) {
    require_same_rank(q);
    for (const auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
  }

  LaurentPoly& operator*=(const LaurentPoly& q) { return *this = *this * q; }

  friend LaurentPoly operator+(LaurentPoly p, const LaurentPoly& q) {
    return p += q;
  }
  friend LaurentPoly operator-(LaurentPoly p, const LaurentPoly& q) {
    return p -= q;
  }

  friend LaurentPoly operator-(LaurentPoly p) {
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
  }

  friend LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q) {
    p.require_same_rank(q);
    LaurentPoly r(p.rank_);
    Monomial e(p.rank_);
    for (const auto& [mp, cp] : p.terms_) {
      for (const auto& [mq, cq] : q.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = mp[i] + mq[i];
        r.add_term(e, cp * cq);
      }
    }
    return r;
  }

  friend LaurentPoly operator*(const Integer& k, LaurentPoly p) {
    if (k == 0) return LaurentPoly(p.rank_);
    for (auto& [m, c] : p.terms_) c *= k;
    return p;
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Multiplication by the monomial a^shift. Cheap: only keys move.
  LaurentPoly times_monomial(const Monomial& shift) const {
    if (shift.size() != rank_) throw UsageError("monomial rank mismatch");
    if (std::all_of(shift.begin(), shift.end(),
                    [](std::int64_t v) { return v == 0; })) {
      return *this;
    }
    LaurentPoly r(rank_);
    for (const auto& [m, c] : terms_) {
      Monomial e = m;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += shift[i];
      r.terms_.emplace_hint(r.terms_.end(), std::move(e), c);
    }
    return r;
  }

  /// Integer power; negative exponents are allowed only for unit monomials.
  LaurentPoly pow(std::int64_t k) const {
    if (k >= 0) return power(static_cast<std::uint64_t>(k));
    if (!is_unit_monomial()) {
      throw PreconditionError("negative power of a non-unit Laurent polynomial");
    }
    const auto& [m, c] = *terms_.begin();
    Monomial inv(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) inv[i] = -m[i];
    return monomial(std::move(inv), c).power(static_cast<std::uint64_t>(-k));
  }

  /// Image under a_i := 1 (0-based i).
  LaurentPoly substitute_one(std::size_t i) const {
    LaurentPoly r(rank_);
    for (const auto& [m, c] : terms_) {
      Monomial e = m;
      e.at(i) = 0;
      r.add_term(std::move(e), c);
    }
    return r;
  }

  /// Augmentation: the image under a_i := 1 for all i.
  Integer coefficient_sum() const {
    Integer s = 0;
    for (const auto& [m, c] : terms_) s += c;
    return s;
  }

 private:
  LaurentPoly power(std::uint64_t k) const {
    LaurentPoly result = one(rank_);
    LaurentPoly base = *this;
    while (k > 0) {
      if (k & 1U) result *= base;
      k >>= 1U;
      if (k > 0) base *= base;
    }
    return result;
  }

  void require_same_rank(const LaurentPoly& q) const {
    if (q.rank_ != rank_) {
      throw UsageError("Laurent polynomial rank mismatch: " +
                       std::to_string(rank_) + " vs " +
                       std::to_string(q.rank_));
    }
  }

  std::size_t rank_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Augmentation ideal
// ---------------------------------------------------------------------------

/// Largest k with p in Δ^k, or infinity for p = 0.
class AugValuation {
 public:
  static AugValuation infinity() { return AugValuation(); }
  explicit AugValuation(std::size_t v) : value_(v) {}

  bool is_infinite() const noexcept { return !value_.has_value(); }

  std::size_t value() const {
    if (!value_) throw UsageError("infinite augmentation valuation");
    return *value_;
  }

  bool at_least(std::size_t k) const noexcept { return !value_ || *value_ >= k; }

  std::string to_string() const {
    return value_ ? std::to_string(*value_) : std::string("inf");
  }

  friend AugValuation operator+(const AugValuation& x, const AugValuation& y) {
    if (x.is_infinite() || y.is_infinite()) return infinity();
    return AugValuation(*x.value_ + *y.value_);
  }

  friend bool operator==(const AugValuation&, const AugValuation&) = default;

  friend std::strong_ordering operator<=>(const AugValuation& x,
                                          const AugValuation& y) {
    if (x.is_infinite() || y.is_infinite()) {
      return x.is_infinite() <=> y.is_infinite();
    }
    return *x.value_ <=> *y.value_;
  }

 private:
  AugValuation() = default;
  std::optional<std::size_t> value_;
};

/// p written as a^{-shift} · Y(a1 - 1, ..., am - 1), where Y is an ordinary
/// polynomial in the variables y_i = a_i - 1 (stored with non-negative
/// exponents) and `shift` is the smallest exponent vector clearing p's
/// denominators.
struct AugmentationExpansion {
  Monomial shift;
  LaurentPoly y;
};

namespace detail {

/// Expands c · Π (x_i + s)^{e_i} for e_i >= 0 into out, with s = +1 or -1.
inline void expand_shifted_power(const Monomial& e, const Integer& c, int s,
                                 LaurentPoly& out) {
  const std::size_t rank = e.size();
  // Per-variable binomial rows: coefficient of x_i^j is C(e_i, j) s^{e_i - j}.
  std::vector<std::vector<Integer>> rows(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    rows[i].resize(static_cast<std::size_t>(e[i]) + 1);
    for (std::int64_t j = 0; j <= e[i]; ++j) {
      Integer b = binomial(e[i], j);
      if (s < 0 && (e[i] - j) % 2 != 0) b = -b;
      rows[i][static_cast<std::size_t>(j)] = std::move(b);
    }
  }
  Monomial idx(rank, 0);
  while (true) {
    Integer coef = c;
    for (std::size_t i = 0; i < rank; ++i) {
      coef *= rows[i][static_cast<std::size_t>(idx[i])];
    }
    out.add_term(idx, coef);
    std::size_t i = 0;
    while (i < rank && idx[i] == e[i]) idx[i++] = 0;
    if (i == rank) break;
    ++idx[i];
  }
}

}  // namespace detail

inline AugmentationExpansion augmentation_expansion(const LaurentPoly& p) {
  const std::size_t rank = p.rank();
  Monomial shift(rank, 0);
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < rank; ++i) shift[i] = std::max(shift[i], -m[i]);
  }
  LaurentPoly y(rank);
  Monomial e(rank);
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < rank; ++i) e[i] = m[i] + shift[i];
    detail::expand_shifted_power(e, c, +1, y);
  }
  return {std::move(shift), std::move(y)};
}

/// Inverse of the substitution: a polynomial in y_i = a_i - 1 back in terms
/// of the a_i.
inline LaurentPoly from_augmentation_coordinates(const LaurentPoly& y) {
  LaurentPoly p(y.rank());
  for (const auto& [m, c] : y.terms()) {
    for (std::int64_t v : m) {
      if (v < 0) throw UsageError("y-polynomial with negative exponent");
    }
    detail::expand_shifted_power(m, c, -1, p);
  }
  return p;
}

inline AugValuation aug_valuation(const LaurentPoly& p) {
  if (p.is_zero()) return AugValuation::infinity();
  const LaurentPoly y = augmentation_expansion(p).y;
  // Terms are deg-lex ordered, so the first has minimum total degree.
  return AugValuation(static_cast<std::size_t>(total_degree(y.terms().begin()->first)));
}

inline bool delta_membership(const LaurentPoly& p, std::size_t k) {
  return aug_valuation(p).at_least(k);
}

/// c_β = (a1 - 1)^β1 ... (am - 1)^βm.
inline LaurentPoly augmentation_product(const Monomial& beta) {
  LaurentPoly y = LaurentPoly::monomial(beta);
  return from_augmentation_coordinates(y);
}

/// Coefficients q_β with p = Σ_β c_β · q_β over all β in N^m with |β| = k.
using DeltaDecomposition = std::map<Monomial, LaurentPoly>;

/// All β in N^rank with |β| = k, in lexicographic order.
inline std::vector<Monomial> compositions(std::size_t rank, std::size_t k) {
  std::vector<Monomial> out;
  Monomial beta(rank, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == rank) {
      beta[i] = left;
      out.push_back(beta);
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      beta[i] = v;
      self(self, i + 1, left - v);
    }
  };
  if (rank > 0) rec(rec, 0, static_cast<std::int64_t>(k));
  return out;
}

namespace detail {

/// Lexicographically least β <= gamma (componentwise) with |β| = k.
inline Monomial least_divisor_of_degree(const Monomial& gamma, std::int64_t k) {
  Monomial beta(gamma.size(), 0);
  for (std::size_t i = gamma.size(); i-- > 0 && k > 0;) {
    beta[i] = std::min(gamma[i], k);
    k -= beta[i];
  }
  return beta;
}

}  // namespace detail

inline DeltaDecomposition delta_decompose(const LaurentPoly& p, std::size_t k) {
  const std::size_t rank = p.rank();
  const AugmentationExpansion ex = augmentation_expansion(p);
  DeltaDecomposition out;
  if (p.is_zero()) return out;
  const auto lowest = total_degree(ex.y.terms().begin()->first);
  if (lowest < static_cast<std::int64_t>(k)) {
    throw PreconditionError("polynomial is not in the augmentation ideal power " +
                            std::to_string(k) + ": valuation is " +
                            std::to_string(lowest));
  }
  std::map<Monomial, LaurentPoly> in_y;
  for (const auto& [gamma, c] : ex.y.terms()) {
    Monomial beta =
        detail::least_divisor_of_degree(gamma, static_cast<std::int64_t>(k));
    Monomial rest = gamma;
    for (std::size_t i = 0; i < rank; ++i) rest[i] -= beta[i];
    auto it = in_y.try_emplace(std::move(beta), rank).first;
    it->second.add_term(std::move(rest), c);
  }
  Monomial unshift(rank);
  for (std::size_t i = 0; i < rank; ++i) unshift[i] = -ex.shift[i];
  for (auto& [beta, qy] : in_y) {
    LaurentPoly q = from_augmentation_coordinates(qy).times_monomial(unshift);
    if (!q.is_zero()) out.emplace(beta, std::move(q));
  }
  return out;
}

/// s with s · (a_var - 1) = a_var^gamma - 1:
/// 1 + a + ... + a^{γ-1} for γ > 0, 0 for γ = 0, -(a^{-1} + ... + a^{γ}) for γ < 0.
inline LaurentPoly geom_series(std::int64_t gamma, std::size_t rank,
                               std::size_t var = 0) {
  LaurentPoly s(rank);
  if (var >= rank) throw UsageError("variable index out of range");
  Monomial e(rank, 0);
  if (gamma > 0) {
    for (std::int64_t j = 0; j < gamma; ++j) {
      e[var] = j;
      s.add_term(e, 1);
    }
  } else {
    for (std::int64_t j = 1; j <= -gamma; ++j) {
      e[var] = -j;
      s.add_term(e, -1);
    }
  }
  return s;
}

/// True iff (a1 - 1) divides p in the Laurent ring, i.e. p(a1 := 1) = 0.
inline bool divisible_by_a1_minus_1(const LaurentPoly& p) {
  return p.substitute_one(0).is_zero();
}

// ---------------------------------------------------------------------------
// Text form: `2*a1^3 - a2^-1 + 7`
// ---------------------------------------------------------------------------

inline std::string format(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += 'a' + std::to_string(i + 1);
      if (m[i] != 1) mono += '^' + std::to_string(m[i]);
    }
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (mono.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + '*' + mono;
    }
  }
  return out;
}

namespace detail {

class LaurentParser {
 public:
  LaurentParser(Cursor& cur, std::size_t rank) : cur_(cur), rank_(rank) {}

  LaurentPoly expr() {
    LaurentPoly acc(rank_);
    bool negate = false;
    if (cur_.accept('-')) {
      negate = true;
    } else {
      cur_.accept('+');
    }
    while (true) {
      LaurentPoly t = term();
      if (negate) {
        acc -= t;
      } else {
        acc += t;
      }
      if (cur_.accept('+')) {
        negate = false;
      } else if (cur_.accept('-')) {
        negate = true;
      } else {
        return acc;
      }
    }
  }

 private:
  LaurentPoly term() {
    LaurentPoly t = factor();
    while (cur_.accept('*')) t *= factor();
    return t;
  }

  LaurentPoly factor() {
    const std::size_t line = cur_.line(), col = cur_.column();
    LaurentPoly base = primary();
    if (!cur_.accept('^')) return base;
    const std::int64_t e = cur_.small_integer();
    if (e < 0 && !base.is_unit_monomial()) {
      throw ParseError(line, col, "negative power of a non-unit");
    }
    return base.pow(e);
  }

  LaurentPoly primary() {
    const char c = cur_.peek();
    if (c == '(') {
      cur_.take();
      LaurentPoly inner = expr();
      cur_.expect(')');
      return inner;
    }
    if (c >= '0' && c <= '9') {
      return LaurentPoly::constant(rank_, cur_.integer());
    }
    if (c == 'a') {
      cur_.take();
      const std::size_t line = cur_.line(), col = cur_.column();
      const std::size_t i = cur_.index_digits();
      if (i < 1 || i > rank_) {
        throw ParseError(line, col,
                         "variable a" + std::to_string(i) +
                             " outside rank " + std::to_string(rank_));
      }
      return LaurentPoly::variable(rank_, i - 1);
    }
    cur_.fail("expected a coefficient, a variable a<i>, or '('");
  }

  Cursor& cur_;
  std::size_t rank_;
};

}  // namespace detail

/// Parses a Laurent polynomial starting at the cursor; stops at the first
/// character that cannot continue the expression.
inline LaurentPoly parse_laurent(Cursor& cur, std::size_t rank) {
  return detail::LaurentParser(cur, rank).expr();
}

inline LaurentPoly parse_laurent(std::string_view text, std::size_t rank) {
  Cursor cur(text);
  LaurentPoly p = parse_laurent(cur, rank);
  cur.expect_end();
  return p;
}

}  // namespace wreathdp
