#pragma once

// Right-iterated wreath products IWP_R(A_k, ..., A_1) = A_k wr IWP_R(A_{k-1}, ..., A_1)
// of free abelian groups A_j = Z^{m_j}, and the lifting of equation systems
// from H to K wr H along the quotient map x ↦ xN (N = C(b) for b in K).

#include "wreathdp/cursor.hpp"
#include "wreathdp/equations.hpp"
#include "wreathdp/errors.hpp"
#include "wreathdp/integer.hpp"
#include "wreathdp/reduction.hpp"
#include "wreathdp/wreath.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wreathdp {

/// Ranks (m_1, ..., m_k), innermost active group first.
struct IteratedSpec {
  std::vector<std::size_t> ranks;

  IteratedSpec() = default;
  explicit IteratedSpec(std::vector<std::size_t> r) : ranks(std::move(r)) {
    if (ranks.empty()) throw UsageError("iterated spec needs at least one rank");
    for (auto m : ranks) {
      if (m < 1) throw UsageError("ranks must be at least 1");
    }
  }

  std::size_t depth() const noexcept { return ranks.size(); }

  IteratedSpec inner() const {
    if (ranks.size() < 2) throw UsageError("depth-1 spec has no inner group");
    return IteratedSpec(std::vector<std::size_t>(ranks.begin(), ranks.end() - 1));
  }

  friend bool operator==(const IteratedSpec&, const IteratedSpec&) = default;
};

class NestedElement;

/// One coordinate of the base: the copy of K indexed by `position` carries `value`.
struct NestedBaseTerm;

/// Element of a right-iterated wreath product. Depth 1 is a plain vector in
/// Z^{m_1}; depth j >= 2 is (active in depth j-1, finitely supported base
/// function into Z^{m_j}) in normal form active·base.
class NestedElement {
 public:
  using Vector = std::vector<Integer>;

  static NestedElement leaf(Vector v) {
    NestedElement e;
    e.depth_ = 1;
    e.leaf_ = std::move(v);
    return e;
  }

  /// Sorts the base, merges repeated positions and drops zero vectors.
  static NestedElement wreath(NestedElement active, std::vector<NestedBaseTerm> base);

  static NestedElement identity(const IteratedSpec& spec);

  std::size_t depth() const noexcept { return depth_; }
  const Vector& leaf_vector() const { return leaf_; }
  const NestedElement& active() const {
    if (!active_) throw UsageError("depth-1 element has no active part");
    return *active_;
  }
  const std::vector<NestedBaseTerm>& base() const noexcept { return base_; }

  bool is_identity() const;

  friend bool operator==(const NestedElement& x, const NestedElement& y);
  friend bool operator<(const NestedElement& x, const NestedElement& y);

 private:
  NestedElement() = default;

  std::size_t depth_ = 1;
  Vector leaf_;
  std::shared_ptr<const NestedElement> active_;
  std::vector<NestedBaseTerm> base_;
};

struct NestedBaseTerm {
  NestedElement position;
  NestedElement::Vector value;
};

inline bool operator==(const NestedBaseTerm& x, const NestedBaseTerm& y) {
  return x.position == y.position && x.value == y.value;
}

inline bool operator<(const NestedBaseTerm& x, const NestedBaseTerm& y) {
  if (x.position < y.position) return true;
  if (y.position < x.position) return false;
  return x.value < y.value;
}

inline bool operator==(const NestedElement& x, const NestedElement& y) {
  if (x.depth_ != y.depth_) return false;
  if (x.depth_ == 1) return x.leaf_ == y.leaf_;
  return (x.active_ == y.active_ || *x.active_ == *y.active_) && x.base_ == y.base_;
}

inline bool operator<(const NestedElement& x, const NestedElement& y) {
  if (x.depth_ != y.depth_) return x.depth_ < y.depth_;
  if (x.depth_ == 1) return x.leaf_ < y.leaf_;
  if (*x.active_ < *y.active_) return true;
  if (*y.active_ < *x.active_) return false;
  return std::lexicographical_compare(x.base_.begin(), x.base_.end(), y.base_.begin(),
                                      y.base_.end());
}

inline NestedElement NestedElement::wreath(NestedElement active,
                                           std::vector<NestedBaseTerm> base) {
  std::sort(base.begin(), base.end(), [](const NestedBaseTerm& a, const NestedBaseTerm& b) {
    return a.position < b.position;
  });
  std::vector<NestedBaseTerm> merged;
  for (auto& t : base) {
    if (t.position.depth() != active.depth()) {
      throw UsageError("base position depth does not match the active part");
    }
    if (!merged.empty() && merged.back().position == t.position) {
      auto& v = merged.back().value;
      if (v.size() != t.value.size()) throw UsageError("base vector length mismatch");
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += t.value[i];
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const NestedBaseTerm& t) {
    return std::all_of(t.value.begin(), t.value.end(), [](const Integer& c) { return c == 0; });
  });
  NestedElement e;
  e.depth_ = active.depth() + 1;
  e.active_ = std::make_shared<const NestedElement>(std::move(active));
  e.base_ = std::move(merged);
  return e;
}

inline NestedElement NestedElement::identity(const IteratedSpec& spec) {
  NestedElement e = leaf(Vector(spec.ranks.front(), 0));
  for (std::size_t j = 1; j < spec.depth(); ++j) e = wreath(std::move(e), {});
  return e;
}

inline bool NestedElement::is_identity() const {
  if (depth_ == 1) {
    return std::all_of(leaf_.begin(), leaf_.end(), [](const Integer& c) { return c == 0; });
  }
  return base_.empty() && active_->is_identity();
}

/// (a1 f1)(a2 f2) = a1 a2 · f1^{a2} f2, where f^{h} moves the copy at
/// position p to position p·h.
inline NestedElement nested_multiply(const NestedElement& g, const NestedElement& h) {
  if (g.depth() != h.depth()) throw UsageError("nested elements of different depth");
  if (g.depth() == 1) {
    if (g.leaf_vector().size() != h.leaf_vector().size()) {
      throw UsageError("nested elements of different rank");
    }
    NestedElement::Vector v = g.leaf_vector();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += h.leaf_vector()[i];
    return NestedElement::leaf(std::move(v));
  }
  std::vector<NestedBaseTerm> base;
  base.reserve(g.base().size() + h.base().size());
  for (const auto& t : g.base()) {
    base.push_back({nested_multiply(t.position, h.active()), t.value});
  }
  base.insert(base.end(), h.base().begin(), h.base().end());
  return NestedElement::wreath(nested_multiply(g.active(), h.active()), std::move(base));
}

/// (a f)^-1 = a^-1 · (f^-1)^{a^-1}.
inline NestedElement nested_inverse(const NestedElement& g) {
  if (g.depth() == 1) {
    NestedElement::Vector v = g.leaf_vector();
    for (auto& c : v) c = -c;
    return NestedElement::leaf(std::move(v));
  }
  NestedElement inv_active = nested_inverse(g.active());
  std::vector<NestedBaseTerm> base;
  base.reserve(g.base().size());
  for (const auto& t : g.base()) {
    NestedElement::Vector v = t.value;
    for (auto& c : v) c = -c;
    base.push_back({nested_multiply(t.position, inv_active), std::move(v)});
  }
  return NestedElement::wreath(std::move(inv_active), std::move(base));
}

/// The coordinate map onto H = G / N: keeps the active part.
inline NestedElement project(const NestedElement& g) { return g.active(); }

/// h ∈ H viewed in K wr H with trivial base.
inline NestedElement embed_active(NestedElement h) {
  return NestedElement::wreath(std::move(h), {});
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

inline std::string format(const NestedElement& g) {
  auto vec = [](const NestedElement::Vector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += to_string(v[i]);
    }
    return s + ")";
  };
  if (g.depth() == 1) return vec(g.leaf_vector());
  std::string out = "{ active: " + format(g.active()) + " ;";
  for (std::size_t i = 0; i < g.base().size(); ++i) {
    out += i ? ", " : " ";
    out += "[ " + format(g.base()[i].position) + " -> " + vec(g.base()[i].value) + " ]";
  }
  return out + " }";
}

namespace detail {

inline NestedElement::Vector parse_int_vector(Cursor& cur, std::size_t len) {
  cur.expect('(');
  NestedElement::Vector v;
  do {
    v.push_back(cur.integer());
  } while (cur.accept(','));
  cur.expect(')');
  if (v.size() != len) {
    cur.fail("expected a vector of length " + std::to_string(len));
  }
  return v;
}

}  // namespace detail

inline NestedElement parse_nested_element(Cursor& cur, const IteratedSpec& spec) {
  if (spec.depth() == 1) {
    return NestedElement::leaf(detail::parse_int_vector(cur, spec.ranks.front()));
  }
  const IteratedSpec inner = spec.inner();
  cur.expect('{');
  cur.expect("active");
  cur.expect(':');
  NestedElement active = parse_nested_element(cur, inner);
  cur.expect(';');
  std::vector<NestedBaseTerm> base;
  if (cur.peek() == '[') {
    do {
      cur.expect('[');
      NestedElement pos = parse_nested_element(cur, inner);
      for (const auto& t : base) {
        if (t.position == pos) cur.fail("duplicate base position");
      }
      cur.expect("->");
      auto v = detail::parse_int_vector(cur, spec.ranks.back());
      cur.expect(']');
      base.push_back({std::move(pos), std::move(v)});
    } while (cur.accept(','));
  }
  cur.expect('}');
  return NestedElement::wreath(std::move(active), std::move(base));
}

inline NestedElement parse_nested_element(std::string_view text, const IteratedSpec& spec) {
  Cursor cur(text);
  NestedElement g = parse_nested_element(cur, spec);
  cur.expect_end();
  return g;
}

/// Group context for IWP_R with the given ranks.
class NestedGroup {
 public:
  using element_type = NestedElement;

  explicit NestedGroup(IteratedSpec spec) : spec_(std::move(spec)) {}

  const IteratedSpec& spec() const noexcept { return spec_; }

  NestedElement identity() const { return NestedElement::identity(spec_); }
  NestedElement multiply(const NestedElement& g, const NestedElement& h) const {
    return nested_multiply(g, h);
  }
  NestedElement inverse(const NestedElement& g) const { return nested_inverse(g); }

  void validate(const NestedElement& g) const { validate_at(g, spec_.depth()); }

  std::string format_element(const NestedElement& g) const { return format(g); }
  NestedElement parse_element(Cursor& cur) const { return parse_nested_element(cur, spec_); }

  /// Generators of the inner group (embedded), then the base generators
  /// at the identity position.
  std::vector<NestedElement> generators() const {
    if (spec_.depth() == 1) {
      std::vector<NestedElement> gens;
      for (std::size_t i = 0; i < spec_.ranks[0]; ++i) {
        NestedElement::Vector v(spec_.ranks[0], 0);
        v[i] = 1;
        gens.push_back(NestedElement::leaf(std::move(v)));
      }
      return gens;
    }
    std::vector<NestedElement> gens;
    for (auto& h : NestedGroup(spec_.inner()).generators()) gens.push_back(embed_active(h));
    for (std::size_t i = 0; i < spec_.ranks.back(); ++i) gens.push_back(base_generator(i));
    return gens;
  }

  /// b_{i+1} of the outermost base, at the identity position.
  NestedElement base_generator(std::size_t i) const {
    if (spec_.depth() < 2) throw UsageError("depth-1 group has no base");
    NestedElement::Vector v(spec_.ranks.back(), 0);
    v.at(i) = 1;
    const NestedElement id = NestedElement::identity(spec_.inner());
    return NestedElement::wreath(id, {{id, std::move(v)}});
  }

 private:
  void validate_at(const NestedElement& g, std::size_t depth) const {
    if (g.depth() != depth) throw UsageError("element depth does not match the group");
    if (depth == 1) {
      if (g.leaf_vector().size() != spec_.ranks[0]) throw UsageError("rank mismatch");
      return;
    }
    validate_at(g.active(), depth - 1);
    for (const auto& t : g.base()) {
      validate_at(t.position, depth - 1);
      if (t.value.size() != spec_.ranks[depth - 1]) throw UsageError("rank mismatch");
    }
  }

  IteratedSpec spec_;
};

// ---------------------------------------------------------------------------
// Bridge to the flat representation (depth 2)
// ---------------------------------------------------------------------------

/// Z^n wr Z^m as IWP_R(Z^n, Z^m): ranks (m, n).
inline IteratedSpec to_iterated(GroupSpec spec) { return IteratedSpec({spec.m, spec.n}); }

inline NestedElement to_nested(const WreathElement& g) {
  const GroupSpec spec = g.spec();
  std::map<Monomial, NestedElement::Vector> cols;
  for (std::size_t j = 0; j < spec.n; ++j) {
    for (const auto& [mono, c] : g.base(j).terms()) {
      auto& v = cols.try_emplace(mono, NestedElement::Vector(spec.n, 0)).first->second;
      v[j] = c;
    }
  }
  auto leaf_of = [](const Monomial& e) {
    return NestedElement::leaf(NestedElement::Vector(e.begin(), e.end()));
  };
  std::vector<NestedBaseTerm> base;
  for (auto& [mono, v] : cols) base.push_back({leaf_of(mono), std::move(v)});
  return NestedElement::wreath(leaf_of(g.active()), std::move(base));
}

inline WreathElement from_nested(const NestedElement& g, GroupSpec spec) {
  if (g.depth() != 2) throw UsageError("only depth-2 elements have a flat form");
  auto exps = [](const NestedElement::Vector& v) {
    Monomial e;
    for (const auto& c : v) {
      if (c > std::numeric_limits<std::int64_t>::max() ||
          c < std::numeric_limits<std::int64_t>::min()) {
        throw UsageError("exponent out of range");
      }
      e.push_back(static_cast<std::int64_t>(c));
    }
    return e;
  };
  std::vector<LaurentPoly> base(spec.n, LaurentPoly(spec.m));
  for (const auto& t : g.base()) {
    const Monomial pos = exps(t.position.leaf_vector());
    for (std::size_t j = 0; j < spec.n; ++j) base[j].add_term(pos, t.value.at(j));
  }
  return WreathElement(spec, exps(g.active().leaf_vector()), std::move(base));
}

// ---------------------------------------------------------------------------
// Lifting systems from H to K wr H
// ---------------------------------------------------------------------------

/// Each equation w = 1 over H becomes {w = t, [t, b] = 1} over K wr H with a
/// fresh t; constants are mapped into K wr H by `embed`. A solution over H
/// lifts with every t ↦ 1, and any solution over K wr H projects to one
/// over H because C(b) = N is the kernel of the projection.
template <class E, class F>
System<NestedElement> lift_system(const System<E>& sys, const F& embed,
                                  const NestedElement& b, NameSupply& names,
                                  const std::string& stem = "lift_t_",
                                  std::vector<std::string>* fresh_out = nullptr) {
  using W = Word<NestedElement>;
  System<NestedElement> out;
  for (const auto& eq : sys.equations()) {
    const W w = map_constants<NestedElement>(eq.lhs, embed);
    const std::string t = names.fresh(stem);
    if (fresh_out) fresh_out->push_back(t);
    out.add(w, W::var(t));
    out.add(W::commutator(W::var(t), W::constant(b)), W::identity());
  }
  for (const auto& v : sys.declared()) out.declare(v);
  return out;
}

/// Lifts a system over IWP_R(m_1..m_{k-1}) to IWP_R(m_1..m_k) using the first
/// generator of the outermost base.
inline System<NestedElement> lift_system(const System<NestedElement>& sys,
                                         const NestedGroup& outer, NameSupply& names,
                                         const std::string& stem = "lift_t_") {
  return lift_system(sys, [](const NestedElement& h) { return embed_active(h); },
                     outer.base_generator(0), names, stem);
}

// ---------------------------------------------------------------------------
// Iterated pipeline
// ---------------------------------------------------------------------------

struct IteratedReduction {
  IteratedSpec spec;
  ReductionOutput inner;  // over Z^{m_2} wr Z^{m_1}
  System<NestedElement> system;
  std::vector<std::string> lift_vars;  // all t's introduced by the lifts

  std::vector<std::string> header() const {
    std::vector<std::string> h = inner.header();
    std::string r = "ranks (outermost first):";
    for (auto it = spec.ranks.rbegin(); it != spec.ranks.rend(); ++it) {
      r += " " + std::to_string(*it);
    }
    h.insert(h.begin(), r);
    return h;
  }
};

inline IteratedReduction compile_iterated(const IntPolynomial& f, const IteratedSpec& spec) {
  if (spec.depth() < 2) throw UsageError("iterated reduction needs at least two ranks");
  IteratedReduction out{spec, compile(f, GroupSpec(spec.ranks[0], spec.ranks[1])), {}, {}};
  out.system = map_constants<NestedElement>(
      out.inner.system, [](const WreathElement& g) { return to_nested(g); });

  std::set<std::string> reserved = out.system.declared();
  NameSupply names(reserved);
  for (std::size_t depth = 3; depth <= spec.depth(); ++depth) {
    const NestedGroup outer(IteratedSpec(
        std::vector<std::size_t>(spec.ranks.begin(), spec.ranks.begin() + depth)));
    out.system = lift_system(
        out.system, [](const NestedElement& h) { return embed_active(h); },
        outer.base_generator(0), names, "lift" + std::to_string(depth) + "_t_",
        &out.lift_vars);
  }
  return out;
}

/// The inner witness embedded with trivial base parts, every lift variable ↦ 1.
inline Assignment<NestedElement> witness_iterated(const IteratedReduction& red,
                                                  std::span<const std::int64_t> z) {
  Assignment<NestedElement> asg;
  for (const auto& [name, g] : witness(red.inner, z)) {
    NestedElement e = to_nested(g);
    while (e.depth() < red.spec.depth()) e = embed_active(std::move(e));
    asg.emplace(name, std::move(e));
  }
  const NestedElement id = NestedElement::identity(red.spec);
  for (const auto& t : red.lift_vars) asg.emplace(t, id);
  return asg;
}

/// Projects each solution variable down to depth 2 and reads off z.
inline std::vector<std::int64_t> extract_iterated(const IteratedReduction& red,
                                                  const Assignment<NestedElement>& asg) {
  Assignment<WreathElement> flat;
  for (const auto& name : red.inner.solution_vars) {
    auto it = asg.find(name);
    if (it == asg.end()) throw PreconditionError("unbound variable '" + name + "'");
    NestedElement e = it->second;
    while (e.depth() > 2) e = project(e);
    flat.emplace(name, from_nested(e, red.inner.spec));
  }
  return extract_solution(red.inner, flat);
}

}  // namespace wreathdp
