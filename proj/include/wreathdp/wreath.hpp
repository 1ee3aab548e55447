#pragma once

// The wreath product G = Z^n wr Z^m of free abelian groups. An element is
// stored in normal form a·f: the active part a in A = Z^m as an exponent
// vector, and the base part f in N = ⊕_{A} Z^n as n coordinate Laurent
// polynomials Q_1..Q_n (f = b1^Q1 ... bn^Qn in module notation).
//
// Conjugation convention: u^{a^γ} = a^{-γ} u a^γ multiplies every coordinate
// of u by the monomial a^γ. With it, (a1 f1)(a2 f2) = a1 a2 f1^{a2} f2.

#include "wreathdp/cursor.hpp"
#include "wreathdp/errors.hpp"
#include "wreathdp/laurent.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wreathdp {

/// G = Z^n wr Z^m: m is the rank of the active group A, n of the base B.
struct GroupSpec {
  std::size_t m = 1;
  std::size_t n = 1;

  GroupSpec() = default;
  GroupSpec(std::size_t active_rank, std::size_t base_rank)
      : m(active_rank), n(base_rank) {
    if (m < 1 || n < 1) throw UsageError("group ranks must be at least 1");
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

class WreathElement {
 public:
  explicit WreathElement(GroupSpec spec)
      : spec_(spec),
        active_(spec.m, 0),
        base_(spec.n, LaurentPoly(spec.m)) {}

  WreathElement(GroupSpec spec, Monomial active, std::vector<LaurentPoly> base)
      : spec_(spec), active_(std::move(active)), base_(std::move(base)) {
    if (active_.size() != spec.m) throw UsageError("active vector length != m");
    if (base_.size() != spec.n) throw UsageError("base coordinate count != n");
    for (const auto& q : base_) {
      if (q.rank() != spec.m) throw UsageError("base coordinate rank != m");
    }
  }

  static WreathElement identity(GroupSpec spec) { return WreathElement(spec); }

  /// a_{i+1}^power (0-based index).
  static WreathElement a(GroupSpec spec, std::size_t i, std::int64_t power = 1) {
    WreathElement g(spec);
    g.active_.at(i) = power;
    return g;
  }

  /// b_{j+1}^q for q in ZA (0-based index); b(spec, j) is the generator.
  static WreathElement b(GroupSpec spec, std::size_t j, LaurentPoly q) {
    WreathElement g(spec);
    if (q.rank() != spec.m) throw UsageError("base coordinate rank != m");
    g.base_.at(j) = std::move(q);
    return g;
  }
  static WreathElement b(GroupSpec spec, std::size_t j) {
    return b(spec, j, LaurentPoly::one(spec.m));
  }

  /// Element of A with the given exponent vector.
  static WreathElement from_active(GroupSpec spec, Monomial active) {
    return WreathElement(spec, std::move(active),
                         std::vector<LaurentPoly>(spec.n, LaurentPoly(spec.m)));
  }

  /// Element of N with the given coordinates.
  static WreathElement from_base(GroupSpec spec, std::vector<LaurentPoly> base) {
    return WreathElement(spec, Monomial(spec.m, 0), std::move(base));
  }

  const GroupSpec& spec() const noexcept { return spec_; }
  const Monomial& active() const noexcept { return active_; }
  const std::vector<LaurentPoly>& base() const noexcept { return base_; }
  const LaurentPoly& base(std::size_t j) const { return base_.at(j); }

  bool is_identity() const {
    for (auto e : active_) {
      if (e != 0) return false;
    }
    for (const auto& q : base_) {
      if (!q.is_zero()) return false;
    }
    return true;
  }

  friend bool operator==(const WreathElement&, const WreathElement&) = default;

  /// Canonical total order: spec, active vector, then coordinates termwise.
  friend bool operator<(const WreathElement& x, const WreathElement& y) {
    if (x.spec_.m != y.spec_.m) return x.spec_.m < y.spec_.m;
    if (x.spec_.n != y.spec_.n) return x.spec_.n < y.spec_.n;
    if (x.active_ != y.active_) return x.active_ < y.active_;
    for (std::size_t j = 0; j < x.base_.size(); ++j) {
      const auto& tx = x.base_[j].terms();
      const auto& ty = y.base_[j].terms();
      if (tx != ty) {
        return std::lexicographical_compare(tx.begin(), tx.end(), ty.begin(),
                                            ty.end());
      }
    }
    return false;
  }

 private:
  GroupSpec spec_;
  Monomial active_;
  std::vector<LaurentPoly> base_;
};

inline void require_same_spec(const WreathElement& g, const WreathElement& h) {
  if (!(g.spec() == h.spec())) {
    throw UsageError("wreath elements belong to different groups");
  }
}

inline WreathElement multiply(const WreathElement& g, const WreathElement& h) {
  require_same_spec(g, h);
  const GroupSpec spec = g.spec();
  Monomial active(spec.m);
  for (std::size_t i = 0; i < spec.m; ++i) {
    active[i] = g.active()[i] + h.active()[i];
  }
  std::vector<LaurentPoly> base;
  base.reserve(spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    base.push_back(g.base(j).times_monomial(h.active()) + h.base(j));
  }
  return WreathElement(spec, std::move(active), std::move(base));
}

inline WreathElement operator*(const WreathElement& g, const WreathElement& h) {
  return multiply(g, h);
}

inline WreathElement inverse(const WreathElement& g) {
  const GroupSpec spec = g.spec();
  Monomial active(spec.m);
  for (std::size_t i = 0; i < spec.m; ++i) active[i] = -g.active()[i];
  std::vector<LaurentPoly> base;
  base.reserve(spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    base.push_back(-g.base(j).times_monomial(active));
  }
  return WreathElement(spec, std::move(active), std::move(base));
}

inline WreathElement power(const WreathElement& g, std::int64_t k) {
  WreathElement base = k < 0 ? inverse(g) : g;
  auto e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  WreathElement result(g.spec());
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

/// [g, h] = g^-1 h^-1 g h.
inline WreathElement commutator(const WreathElement& g, const WreathElement& h) {
  return inverse(g) * inverse(h) * g * h;
}

/// Left-normed [g1, ..., gr] = [[g1, ..., g_{r-1}], g_r]; [g1] = g1.
inline WreathElement commutator(std::span<const WreathElement> gs) {
  if (gs.empty()) throw UsageError("empty commutator");
  WreathElement acc = gs.front();
  for (std::size_t i = 1; i < gs.size(); ++i) acc = commutator(acc, gs[i]);
  return acc;
}

inline WreathElement commutator(std::initializer_list<WreathElement> gs) {
  return commutator(std::span<const WreathElement>(gs.begin(), gs.size()));
}

inline bool in_N(const WreathElement& g) {
  for (auto e : g.active()) {
    if (e != 0) return false;
  }
  return true;
}

inline bool in_A(const WreathElement& g) {
  for (const auto& q : g.base()) {
    if (!q.is_zero()) return false;
  }
  return true;
}

/// u^p for u in N and p in ZA: every coordinate multiplied by p.
inline WreathElement module_action(const WreathElement& u, const LaurentPoly& p) {
  if (!in_N(u)) throw PreconditionError("module action needs an element of N");
  if (p.rank() != u.spec().m) throw UsageError("ring rank != m");
  std::vector<LaurentPoly> base;
  base.reserve(u.spec().n);
  for (const auto& q : u.base()) base.push_back(q * p);
  return WreathElement::from_base(u.spec(), std::move(base));
}

/// g in N^{Δ^k}. For k >= 1 this is membership in the (k+1)-th term of the
/// lower central series.
inline bool in_delta_power(const WreathElement& g, std::size_t k) {
  if (!in_N(g)) return false;
  for (const auto& q : g.base()) {
    if (!delta_membership(q, k)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lower central series
// ---------------------------------------------------------------------------

/// [b_k, a_{j1}, ..., a_{j_{i-1}}] with j1 <= ... <= j_{i-1}; indices 1-based.
struct LcsBasisElement {
  std::size_t k;
  std::vector<std::size_t> js;

  WreathElement element(GroupSpec spec) const {
    std::vector<WreathElement> chain;
    chain.push_back(WreathElement::b(spec, k - 1));
    for (auto j : js) chain.push_back(WreathElement::a(spec, j - 1));
    return commutator(chain);
  }

  friend bool operator==(const LcsBasisElement&, const LcsBasisElement&) = default;
};

/// Free abelian basis of Γ_i / Γ_{i+1} for i >= 2.
inline std::vector<LcsBasisElement> lcs_basis(std::size_t i, GroupSpec spec) {
  if (i < 2) throw UsageError("lcs_basis needs i >= 2");
  std::vector<LcsBasisElement> out;
  for (std::size_t k = 1; k <= spec.n; ++k) {
    // Non-decreasing sequences of length i-1 over 1..m, in lexicographic order.
    std::vector<std::size_t> js(i - 1, 1);
    while (true) {
      out.push_back({k, js});
      std::size_t pos = js.size();
      while (pos > 0 && js[pos - 1] == spec.m) --pos;
      if (pos == 0) break;
      const std::size_t v = js[pos - 1] + 1;
      for (std::size_t t = pos - 1; t < js.size(); ++t) js[t] = v;
    }
  }
  return out;
}

/// n · C(i + m - 2, m - 1).
inline Integer lcs_rank(std::size_t i, GroupSpec spec) {
  if (i < 2) throw UsageError("lcs_rank needs i >= 2");
  return Integer(spec.n) * binomial(static_cast<std::int64_t>(i + spec.m - 2),
                                    static_cast<std::int64_t>(spec.m - 1));
}

// ---------------------------------------------------------------------------
// Text form: `{ active: (2,0) ; b1: a1 - 1, b2: 3 }`
// ---------------------------------------------------------------------------

inline std::string format(const WreathElement& g) {
  std::string out = "{ active: (";
  for (std::size_t i = 0; i < g.active().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(g.active()[i]);
  }
  out += ") ;";
  bool first = true;
  for (std::size_t j = 0; j < g.base().size(); ++j) {
    if (g.base(j).is_zero()) continue;
    out += first ? " " : ", ";
    first = false;
    out += 'b' + std::to_string(j + 1) + ": " + format(g.base(j));
  }
  out += " }";
  return out;
}

inline WreathElement parse_wreath_element(Cursor& cur, GroupSpec spec) {
  cur.expect('{');
  Monomial active(spec.m, 0);
  if (cur.peek() == 'a') {
    cur.expect("active");
    cur.expect(':');
    cur.expect('(');
    std::size_t count = 0;
    do {
      const std::int64_t e = cur.small_integer();
      if (count >= spec.m) cur.fail("active vector longer than m");
      active[count++] = e;
    } while (cur.accept(','));
    if (count != spec.m) cur.fail("active vector shorter than m");
    cur.expect(')');
  }
  cur.accept(';');
  std::vector<LaurentPoly> base(spec.n, LaurentPoly(spec.m));
  std::vector<bool> seen(spec.n, false);
  if (cur.peek() == 'b') {
    do {
      cur.expect('b');
      const std::size_t line = cur.line(), col = cur.column();
      const std::size_t j = cur.index_digits();
      if (j < 1 || j > spec.n) {
        throw ParseError(line, col,
                         "base generator b" + std::to_string(j) +
                             " outside rank " + std::to_string(spec.n));
      }
      if (seen[j - 1]) throw ParseError(line, col, "duplicate coordinate");
      seen[j - 1] = true;
      cur.expect(':');
      base[j - 1] = parse_laurent(cur, spec.m);
    } while (cur.accept(','));
  }
  cur.expect('}');
  return WreathElement(spec, std::move(active), std::move(base));
}

inline WreathElement parse_wreath_element(std::string_view text, GroupSpec spec) {
  Cursor cur(text);
  WreathElement g = parse_wreath_element(cur, spec);
  cur.expect_end();
  return g;
}

/// Group context for Z^n wr Z^m, used by the generic equation machinery.
class WreathGroup {
 public:
  using element_type = WreathElement;

  explicit WreathGroup(GroupSpec spec) : spec_(spec) {}

  const GroupSpec& spec() const noexcept { return spec_; }

  WreathElement identity() const { return WreathElement(spec_); }
  WreathElement multiply(const WreathElement& g, const WreathElement& h) const {
    return wreathdp::multiply(g, h);
  }
  WreathElement inverse(const WreathElement& g) const {
    return wreathdp::inverse(g);
  }
  void validate(const WreathElement& g) const {
    if (!(g.spec() == spec_)) {
      throw UsageError("element does not belong to this wreath product");
    }
  }
  std::string format_element(const WreathElement& g) const { return format(g); }
  WreathElement parse_element(Cursor& cur) const {
    return parse_wreath_element(cur, spec_);
  }

  /// a1..am followed by b1..bn.
  std::vector<WreathElement> generators() const {
    std::vector<WreathElement> gens;
    for (std::size_t i = 0; i < spec_.m; ++i) gens.push_back(WreathElement::a(spec_, i));
    for (std::size_t j = 0; j < spec_.n; ++j) gens.push_back(WreathElement::b(spec_, j));
    return gens;
  }

 private:
  GroupSpec spec_;
};

}  // namespace wreathdp
