#pragma once

// Compiler from an integer polynomial equation f(z1, ..., zs) = 0 to a finite
// system S_f of equations over G = Z^n wr Z^m such that f has an integer root
// iff S_f has a solution in G.
//
// Encoding: x_i ranges over <a1> (x_i = a1^{z_i}); each term t_α z^α becomes
//   e_α = t_α (a1 - 1)^{d - |α|} Π (x_i - 1)^{α_i}   in ZA,
// realised in N as y_α = [b1^{t_α}, a1, ..., a1, x1, ..., xs] (left-normed).
// With e_f = Σ e_α and y = Π y_α = b1^{e_f}:  e_f ∈ Δ^{d+1} ⟺ f(z) = 0.

#include "wreathdp/cursor.hpp"
#include "wreathdp/equations.hpp"
#include "wreathdp/errors.hpp"
#include "wreathdp/gadgets.hpp"
#include "wreathdp/integer.hpp"
#include "wreathdp/laurent.hpp"
#include "wreathdp/wreath.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wreathdp {

/// f = Σ t_α z^α with α in N^s and nonzero integer t_α.
class IntPolynomial {
 public:
  using Exponent = std::vector<std::uint32_t>;
  using Terms = std::map<Exponent, Integer>;

  explicit IntPolynomial(std::size_t variables = 0) : s_(variables) {}

  std::size_t variables() const noexcept { return s_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(Exponent alpha, const Integer& c) {
    if (alpha.size() != s_) throw UsageError("exponent length != variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(alpha), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Total degree; 0 for constants and for the zero polynomial.
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& [alpha, c] : terms_) d = std::max(d, weight(alpha));
    return d;
  }

  static std::size_t weight(const Exponent& alpha) {
    std::size_t w = 0;
    for (auto e : alpha) w += e;
    return w;
  }

  Integer evaluate(std::span<const std::int64_t> z) const {
    if (z.size() != s_) throw UsageError("expected " + std::to_string(s_) + " values");
    Integer sum = 0;
    for (const auto& [alpha, c] : terms_) {
      Integer t = c;
      for (std::size_t i = 0; i < s_; ++i) t *= boost::multiprecision::pow(Integer(z[i]), alpha[i]);
      sum += t;
    }
    return sum;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::size_t s_;
  Terms terms_;
};

inline std::string format(const IntPolynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [alpha, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += 'z' + std::to_string(i + 1);
      if (alpha[i] != 1) mono += '^' + std::to_string(alpha[i]);
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

/// Sparse polynomial over variable indices, before the variable count is known.
using RawPoly = std::map<std::vector<std::uint32_t>, Integer>;

class IntPolyParser {
 public:
  explicit IntPolyParser(Cursor& cur) : cur_(cur) {}

  RawPoly expr() {
    RawPoly acc;
    bool negate = false;
    if (cur_.accept('-')) {
      negate = true;
    } else {
      cur_.accept('+');
    }
    while (true) {
      add_into(acc, term(), negate ? -1 : 1);
      if (cur_.accept('+')) {
        negate = false;
      } else if (cur_.accept('-')) {
        negate = true;
      } else {
        return acc;
      }
    }
  }

  std::size_t max_index() const { return max_index_; }

 private:
  static void add_into(RawPoly& acc, const RawPoly& t, int sign) {
    for (const auto& [e, c] : t) {
      auto& slot = acc[e];
      slot += sign * c;
      if (slot == 0) acc.erase(e);
    }
  }

  static std::vector<std::uint32_t> add_exp(std::vector<std::uint32_t> a,
                                            const std::vector<std::uint32_t>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }

  static RawPoly mul(const RawPoly& p, const RawPoly& q) {
    RawPoly r;
    for (const auto& [ep, cp] : p) {
      for (const auto& [eq, cq] : q) {
        auto& slot = r[add_exp(ep, eq)];
        slot += cp * cq;
      }
    }
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
  }

  RawPoly term() {
    RawPoly t = factor();
    while (cur_.accept('*')) t = mul(t, factor());
    return t;
  }

  RawPoly factor() {
    RawPoly base = primary();
    if (!cur_.accept('^')) return base;
    const std::size_t line = cur_.line(), col = cur_.column();
    const std::int64_t e = cur_.small_integer();
    if (e < 0) throw ParseError(line, col, "negative exponent in integer polynomial");
    RawPoly r{{{}, 1}};
    for (std::int64_t i = 0; i < e; ++i) r = mul(r, base);
    return r;
  }

  RawPoly primary() {
    const char c = cur_.peek();
    if (c == '(') {
      cur_.take();
      RawPoly inner = expr();
      cur_.expect(')');
      return inner;
    }
    if (c >= '0' && c <= '9') {
      Integer v = cur_.integer();
      if (v == 0) return {};
      return {{{}, v}};
    }
    if (c == 'z') {
      cur_.take();
      const std::size_t line = cur_.line(), col = cur_.column();
      const std::size_t i = cur_.index_digits();
      if (i < 1) throw ParseError(line, col, "variables are numbered from z1");
      max_index_ = std::max(max_index_, i);
      std::vector<std::uint32_t> e(i, 0);
      e[i - 1] = 1;
      return {{e, 1}};
    }
    cur_.fail("expected a coefficient, a variable z<i>, or '('");
  }

  Cursor& cur_;
  std::size_t max_index_ = 0;
};

}  // namespace detail

/// Parses `z1^2*z2 - 3*z1 + 7`. The variable count is the largest index
/// used unless `variables` is given (it must then cover every index).
inline IntPolynomial parse_int_polynomial(std::string_view text,
                                          std::optional<std::size_t> variables = {}) {
  Cursor cur(text);
  detail::IntPolyParser parser(cur);
  const auto raw = parser.expr();
  cur.expect_end();
  const std::size_t s = variables.value_or(parser.max_index());
  if (parser.max_index() > s) {
    throw UsageError("polynomial uses z" + std::to_string(parser.max_index()) +
                     " but only " + std::to_string(s) + " variables were given");
  }
  IntPolynomial f(s);
  for (const auto& [e, c] : raw) {
    IntPolynomial::Exponent alpha = e;
    alpha.resize(s, 0);
    f.add_term(std::move(alpha), c);
  }
  return f;
}

// ---------------------------------------------------------------------------
// The compiler
// ---------------------------------------------------------------------------

struct ReductionOutput {
  GroupSpec spec;
  IntPolynomial polynomial;
  System<WreathElement> system;
  std::vector<std::string> solution_vars;  // x_i carries z_i as a1^{z_i}
  std::size_t d = 0;
  std::string product_var;  // y = b1^{e_f}

  std::vector<gadgets::CyclicGadget> cyclic;
  std::vector<Definition<WreathElement>> definitions;  // y_α chains and y
  std::optional<gadgets::DeltaPowerGadget> membership;

  std::vector<std::string> header() const {
    std::string vars = "solution:";
    for (const auto& v : solution_vars) vars += " " + v;
    return {"f = " + format(polynomial), vars,
            "degree: " + std::to_string(d) +
                (product_var.empty() ? "" : ", membership in Delta^" +
                                                std::to_string(d + 1) + " of " +
                                                product_var)};
  }
};

inline ReductionOutput compile(const IntPolynomial& f, GroupSpec spec) {
  using W = Word<WreathElement>;
  ReductionOutput out{spec, f, {}, {}, f.degree(), {}, {}, {}, {}};
  // The zero polynomial is solved by every tuple; its image is the empty system.
  if (f.is_zero()) return out;

  std::set<std::string> reserved{"y"};
  for (std::size_t i = 1; i <= f.variables(); ++i) reserved.insert("x" + std::to_string(i));
  NameSupply names(reserved);

  const std::size_t d = out.d;
  for (std::size_t i = 1; i <= f.variables(); ++i) {
    out.solution_vars.push_back("x" + std::to_string(i));
    auto g = gadgets::cyclic(out.solution_vars.back(), spec, names);
    out.system.append(g.system);
    out.cyclic.push_back(std::move(g));
  }

  gadgets::Gadget chains;
  std::vector<W> product;
  // Leading terms first, matching the printed form of f.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [alpha, t] = *it;
    const std::string y_alpha = names.fresh("y_");
    std::vector<W> atoms;
    for (std::size_t r = IntPolynomial::weight(alpha); r < d; ++r) {
      atoms.push_back(W::constant(WreathElement::a(spec, 0)));
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (std::uint32_t r = 0; r < alpha[i]; ++r) atoms.push_back(W::var(out.solution_vars[i]));
    }
    const W head = W::constant(WreathElement::b(spec, 0, LaurentPoly::constant(spec.m, t)));
    gadgets::define_left_normed(y_alpha, head, atoms, names, "y_t_", chains);
    product.push_back(W::var(y_alpha));
  }
  out.product_var = "y";
  Definition<WreathElement> ydef{out.product_var, W::concat(product)};
  chains.system.add(ydef.equation());
  chains.definitions.push_back(std::move(ydef));
  out.system.append(chains.system);
  out.definitions = std::move(chains.definitions);

  auto membership = gadgets::delta_power(out.product_var, d + 1, spec, names);
  out.system.append(membership.system);
  out.membership = std::move(membership);
  return out;
}

/// A satisfying assignment of compile(f).system built from an integer root z.
inline Assignment<WreathElement> witness(const ReductionOutput& out,
                                         std::span<const std::int64_t> z) {
  const Integer value = out.polynomial.evaluate(z);
  if (value != 0) {
    throw PreconditionError("not a root: f(z) = " + to_string(value));
  }
  Assignment<WreathElement> asg;
  if (out.polynomial.is_zero()) return asg;
  const WreathGroup grp(out.spec);
  for (std::size_t i = 0; i < out.cyclic.size(); ++i) {
    asg.merge(gadgets::witness_cyclic(z[i], out.spec, out.cyclic[i]));
  }
  extend_assignment(out.definitions, asg, grp);
  asg.merge(gadgets::witness_delta_power(asg.at(out.product_var), *out.membership));
  return asg;
}

inline Assignment<WreathElement> witness(const IntPolynomial& f,
                                         std::span<const std::int64_t> z, GroupSpec spec) {
  return witness(compile(f, spec), z);
}

/// Reads z back from x_i = a1^{z_i}.
inline std::vector<std::int64_t> extract_solution(const ReductionOutput& out,
                                                  const Assignment<WreathElement>& asg) {
  std::vector<std::int64_t> z;
  for (const auto& name : out.solution_vars) {
    auto it = asg.find(name);
    if (it == asg.end()) throw PreconditionError("unbound variable '" + name + "'");
    const WreathElement& x = it->second;
    bool pure = in_A(x);
    for (std::size_t i = 1; pure && i < x.active().size(); ++i) pure = x.active()[i] == 0;
    if (!pure) {
      throw PreconditionError(name + " = " + format(x) + " is not a power of a1");
    }
    z.push_back(x.active()[0]);
  }
  return z;
}

struct OracleResult {
  LaurentPoly e_f;
  AugValuation valuation;
  std::size_t d;
  bool member;  // e_f in Δ^{d+1}
};

/// e_f computed directly in ZA (rank m), independent of the group words.
inline OracleResult oracle_ef(const IntPolynomial& f, std::span<const std::int64_t> z,
                              std::size_t m = 1) {
  if (z.size() != f.variables()) {
    throw UsageError("expected " + std::to_string(f.variables()) + " values");
  }
  const std::size_t d = f.degree();
  const LaurentPoly one = LaurentPoly::one(m);
  const LaurentPoly a_minus_1 = LaurentPoly::variable(m, 0) - one;
  LaurentPoly ef(m);
  for (const auto& [alpha, t] : f.terms()) {
    LaurentPoly e = LaurentPoly::constant(m, t) *
                    a_minus_1.pow(static_cast<std::int64_t>(d - IntPolynomial::weight(alpha)));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      e *= (LaurentPoly::variable(m, 0, z[i]) - one).pow(static_cast<std::int64_t>(alpha[i]));
    }
    ef += e;
  }
  AugValuation v = aug_valuation(ef);
  const bool member = v.at_least(d + 1);
  return {std::move(ef), v, d, member};
}

}  // namespace wreathdp
