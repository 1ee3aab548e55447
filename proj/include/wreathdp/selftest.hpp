#pragma once

// Random generators for the library's value types and the property suites
// run by `wreathdp selftest`. Every suite is deterministic for a given seed.

#include "wreathdp/equations.hpp"
#include "wreathdp/interp.hpp"
#include "wreathdp/laurent.hpp"
#include "wreathdp/reduction.hpp"
#include "wreathdp/wreath.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wreathdp::selftest {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline std::int64_t nonzero(Rng& rng, std::int64_t bound) {
  std::int64_t v = uniform(rng, 1, bound);
  return uniform(rng, 0, 1) ? v : -v;
}

inline Monomial random_monomial(Rng& rng, std::size_t rank, std::int64_t lo, std::int64_t hi) {
  Monomial e(rank);
  for (auto& v : e) v = uniform(rng, lo, hi);
  return e;
}

/// Up to `max_terms` terms, exponents in [-3, 3], coefficients in [-5, 5].
inline LaurentPoly random_laurent(Rng& rng, std::size_t rank, std::size_t max_terms = 4,
                                  std::int64_t exp_bound = 3) {
  LaurentPoly p(rank);
  const auto terms = uniform(rng, 0, static_cast<std::int64_t>(max_terms));
  for (std::int64_t t = 0; t < terms; ++t) {
    p.add_term(random_monomial(rng, rank, -exp_bound, exp_bound), nonzero(rng, 5));
  }
  return p;
}

/// Nonzero element of Δ^k: a random combination of the generators c_β.
inline LaurentPoly random_delta_power(Rng& rng, std::size_t rank, std::size_t k) {
  while (true) {
    LaurentPoly p(rank);
    for (const auto& beta : compositions(rank, k)) {
      if (uniform(rng, 0, 1)) p += augmentation_product(beta) * random_laurent(rng, rank, 2);
    }
    if (!p.is_zero()) return p;
  }
}

/// Exponents in [-3, 3], at most 4 base terms in total.
inline WreathElement random_element(Rng& rng, GroupSpec spec) {
  std::vector<LaurentPoly> base(spec.n, LaurentPoly(spec.m));
  const auto terms = uniform(rng, 0, 4);
  for (std::int64_t t = 0; t < terms; ++t) {
    const auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(spec.n) - 1));
    base[j].add_term(random_monomial(rng, spec.m, -3, 3), nonzero(rng, 5));
  }
  return WreathElement(spec, random_monomial(rng, spec.m, -3, 3), std::move(base));
}

inline WreathElement random_in_N(Rng& rng, GroupSpec spec, bool nontrivial = false) {
  while (true) {
    WreathElement g = random_element(rng, spec);
    WreathElement u = WreathElement::from_base(spec, g.base());
    if (!nontrivial || !u.is_identity()) return u;
  }
}

inline WreathElement random_in_A(Rng& rng, GroupSpec spec, bool nontrivial = false) {
  while (true) {
    WreathElement x = WreathElement::from_active(spec, random_monomial(rng, spec.m, -3, 3));
    if (!nontrivial || !x.is_identity()) return x;
  }
}

inline WreathElement random_outside_N(Rng& rng, GroupSpec spec) {
  while (true) {
    WreathElement g = random_element(rng, spec);
    if (!in_N(g)) return g;
  }
}

inline WreathElement random_outside_A(Rng& rng, GroupSpec spec) {
  while (true) {
    WreathElement g = random_element(rng, spec);
    if (!in_A(g)) return g;
  }
}

inline NestedElement random_nested(Rng& rng, const IteratedSpec& spec, std::size_t max_support = 3) {
  if (spec.depth() == 1) {
    NestedElement::Vector v;
    for (std::size_t i = 0; i < spec.ranks[0]; ++i) v.emplace_back(uniform(rng, -3, 3));
    return NestedElement::leaf(std::move(v));
  }
  const IteratedSpec inner = spec.inner();
  NestedElement active = random_nested(rng, inner, max_support);
  std::vector<NestedBaseTerm> base;
  const auto support = uniform(rng, 0, static_cast<std::int64_t>(max_support));
  for (std::int64_t t = 0; t < support; ++t) {
    NestedElement::Vector v;
    for (std::size_t i = 0; i < spec.ranks.back(); ++i) v.emplace_back(uniform(rng, -3, 3));
    base.push_back({random_nested(rng, inner, max_support > 1 ? max_support - 1 : 1), std::move(v)});
  }
  return NestedElement::wreath(std::move(active), std::move(base));
}

/// s in [1, 3] variables, total degree <= 3, 1..5 terms, |t_α| <= 10.
inline IntPolynomial random_polynomial(Rng& rng, std::size_t max_vars = 3,
                                       std::size_t max_degree = 3) {
  const auto s = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_vars)));
  IntPolynomial f(s);
  const auto terms = uniform(rng, 1, 5);
  for (std::int64_t t = 0; t < terms; ++t) {
    IntPolynomial::Exponent alpha(s, 0);
    const auto deg = uniform(rng, 0, static_cast<std::int64_t>(max_degree));
    for (std::int64_t r = 0; r < deg; ++r) {
      ++alpha[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(s) - 1))];
    }
    f.add_term(std::move(alpha), nonzero(rng, 10));
  }
  return f;
}

inline std::vector<std::int64_t> random_point(Rng& rng, std::size_t s, std::int64_t bound = 5) {
  std::vector<std::int64_t> z(s);
  for (auto& v : z) v = uniform(rng, -bound, bound);
  return z;
}

/// f - f(z), so that z is a root. Non-constant f stays nonzero.
inline IntPolynomial plant_root(const IntPolynomial& f, std::span<const std::int64_t> z) {
  IntPolynomial g = f;
  g.add_term(IntPolynomial::Exponent(f.variables(), 0), -f.evaluate(z));
  return g;
}

/// Random word tree of the given depth over `vars` and `constants`.
template <class E>
Word<E> random_word(Rng& rng, std::size_t depth, const std::vector<std::string>& vars,
                    const std::vector<E>& constants) {
  using W = Word<E>;
  const auto leaf = [&]() -> W {
    const auto pick = uniform(rng, 0, static_cast<std::int64_t>(vars.size() + constants.size()) - 1);
    const int sign = uniform(rng, 0, 1) ? 1 : -1;
    if (pick < static_cast<std::int64_t>(vars.size())) {
      return W::var(vars[static_cast<std::size_t>(pick)], sign);
    }
    return W::constant(constants[static_cast<std::size_t>(pick) - vars.size()], sign);
  };
  if (depth == 0) return leaf();
  switch (uniform(rng, 0, 3)) {
    case 0:
      return leaf();
    case 1: {
      std::vector<W> parts;
      const auto n = uniform(rng, 0, 3);
      for (std::int64_t i = 0; i < n; ++i) parts.push_back(random_word(rng, depth - 1, vars, constants));
      return W::concat(parts);
    }
    case 2:
      return W::commutator(random_word(rng, depth - 1, vars, constants),
                           random_word(rng, depth - 1, vars, constants));
    default:
      return W::power(random_word(rng, depth - 1, vars, constants), uniform(rng, -2, 2));
  }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteResult {
  explicit SuiteResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++samples;
    if (!ok) {
      if (violations == 0) first_failure = what;
      ++violations;
    }
  }
};

inline SuiteResult laurent_ring_axioms(std::size_t samples, Rng& rng) {
  SuiteResult r("laurent ring axioms");
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto p = random_laurent(rng, m), q = random_laurent(rng, m), s = random_laurent(rng, m);
    const bool ok = (p * q) * s == p * (q * s) && p * q == q * p && p + q == q + p &&
                    p * (q + s) == p * q + p * s && (p + (-p)).is_zero() &&
                    p * LaurentPoly::one(m) == p;
    r.check(ok, "p = " + format(p) + ", q = " + format(q) + ", s = " + format(s));
  }
  return r;
}

inline SuiteResult valuation_laws(std::size_t samples, Rng& rng) {
  SuiteResult r("augmentation valuation laws");
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto p = random_laurent(rng, m), q = random_laurent(rng, m);
    const auto vp = aug_valuation(p), vq = aug_valuation(q);
    bool ok = aug_valuation(p * q) == vp + vq && aug_valuation(p + q) >= std::min(vp, vq);
    ok = ok && aug_valuation(p.times_monomial(random_monomial(rng, m, -4, 4))) == vp;
    r.check(ok, "p = " + format(p) + ", q = " + format(q));
  }
  return r;
}

inline SuiteResult decomposition_recomposes(std::size_t samples, Rng& rng) {
  SuiteResult r("delta decomposition recomposes");
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t m = static_cast<std::size_t>(uniform(rng, 1, 3));
    const std::size_t k = static_cast<std::size_t>(uniform(rng, 1, 4));
    const LaurentPoly p = random_delta_power(rng, m, k);
    LaurentPoly sum(m);
    for (const auto& [beta, q] : delta_decompose(p, k)) sum += augmentation_product(beta) * q;
    r.check(sum == p, "k = " + std::to_string(k) + ", p = " + format(p));
  }
  return r;
}

inline SuiteResult wreath_group_axioms(std::size_t samples, Rng& rng) {
  SuiteResult r("wreath group axioms");
  for (std::size_t i = 0; i < samples; ++i) {
    const GroupSpec spec(static_cast<std::size_t>(uniform(rng, 1, 3)),
                         static_cast<std::size_t>(uniform(rng, 1, 3)));
    const auto g = random_element(rng, spec), h = random_element(rng, spec),
               k = random_element(rng, spec);
    const auto id = WreathElement::identity(spec);
    const bool ok = (g * h) * k == g * (h * k) && g * inverse(g) == id &&
                    inverse(g) * g == id && g * id == g && id * g == g;
    r.check(ok, "g = " + format(g) + ", h = " + format(h));
  }
  return r;
}

/// [g, u] = 1 ⟺ g ∈ N for nontrivial u ∈ N; [g, x] = 1 ⟺ g ∈ A for
/// nontrivial x ∈ A. `samples` per direction per law.
inline SuiteResult centralizer_laws(std::size_t samples, Rng& rng) {
  SuiteResult r("centralizer laws");
  for (std::size_t i = 0; i < samples; ++i) {
    const GroupSpec spec(static_cast<std::size_t>(uniform(rng, 1, 3)),
                         static_cast<std::size_t>(uniform(rng, 1, 3)));
    const auto u = random_in_N(rng, spec, true);
    const auto x = random_in_A(rng, spec, true);
    const auto in = random_in_N(rng, spec), out = random_outside_N(rng, spec);
    r.check(commutator(in, u).is_identity(), "N commutes: " + format(in));
    r.check(!commutator(out, u).is_identity(), "outside N: " + format(out) + " vs " + format(u));
    const auto ina = random_in_A(rng, spec), outa = random_outside_A(rng, spec);
    r.check(commutator(ina, x).is_identity(), "A commutes: " + format(ina));
    r.check(!commutator(outa, x).is_identity(), "outside A: " + format(outa) + " vs " + format(x));
  }
  return r;
}

inline SuiteResult nested_group_axioms(std::size_t samples, Rng& rng) {
  SuiteResult r("nested group axioms (depth <= 3)");
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<std::size_t> ranks(static_cast<std::size_t>(uniform(rng, 1, 3)));
    for (auto& m : ranks) m = static_cast<std::size_t>(uniform(rng, 1, 2));
    const NestedGroup grp{IteratedSpec(ranks)};
    const auto g = random_nested(rng, grp.spec()), h = random_nested(rng, grp.spec()),
               k = random_nested(rng, grp.spec());
    const auto id = grp.identity();
    bool ok = grp.multiply(grp.multiply(g, h), k) == grp.multiply(g, grp.multiply(h, k)) &&
              grp.multiply(g, grp.inverse(g)) == id && grp.multiply(id, g) == g;
    if (ranks.size() >= 2) {
      ok = ok && project(grp.multiply(g, h)) == nested_multiply(project(g), project(h));
    }
    r.check(ok, "g = " + format(g) + ", h = " + format(h));
  }
  return r;
}

inline SuiteResult nested_flat_agreement(std::size_t samples, Rng& rng) {
  SuiteResult r("depth-2 nested agrees with flat");
  for (std::size_t i = 0; i < samples; ++i) {
    const GroupSpec spec(static_cast<std::size_t>(uniform(rng, 1, 3)),
                         static_cast<std::size_t>(uniform(rng, 1, 3)));
    const auto g = random_element(rng, spec), h = random_element(rng, spec);
    const bool ok = to_nested(g * h) == nested_multiply(to_nested(g), to_nested(h)) &&
                    to_nested(inverse(g)) == nested_inverse(to_nested(g)) &&
                    from_nested(to_nested(g), spec) == g;
    r.check(ok, "g = " + format(g) + ", h = " + format(h));
  }
  return r;
}

inline SuiteResult flatten_equivalence(std::size_t samples, Rng& rng) {
  SuiteResult r("flatten equivalence");
  const GroupSpec spec(2, 1);
  const WreathGroup grp(spec);
  const std::vector<std::string> vars{"x", "y", "z"};
  for (std::size_t i = 0; i < samples; ++i) {
    const std::vector<WreathElement> consts{random_element(rng, spec), random_element(rng, spec)};
    const auto w = random_word(rng, 4, vars, consts);
    Assignment<WreathElement> asg;
    for (const auto& v : vars) asg.emplace(v, random_element(rng, spec));
    NameSupply names({"x", "y", "z"});
    const auto flat = flatten(w, names);
    Assignment<WreathElement> ext = asg;
    extend_assignment(flat.definitions, ext, grp);
    const bool ok = flat.word.is_flat() && check_system(flat.aux, ext, grp).satisfied &&
                    evaluate(flat.word, ext, grp) == evaluate(w, asg, grp);
    r.check(ok, "word = " + serialize_word(w, grp));
  }
  return r;
}

/// Random (f, z) with a planted root half of the time.
inline SuiteResult oracle_equivalence(std::size_t samples, Rng& rng) {
  SuiteResult r("oracle verdict matches f(z) = 0");
  for (std::size_t i = 0; i < samples; ++i) {
    IntPolynomial f = random_polynomial(rng);
    const auto z = random_point(rng, f.variables());
    if (uniform(rng, 0, 1)) f = plant_root(f, z);
    const auto res = oracle_ef(f, z, static_cast<std::size_t>(uniform(rng, 1, 2)));
    r.check(res.member == (f.evaluate(z) == 0), "f = " + format(f));
  }
  return r;
}

inline SuiteResult reduction_soundness(std::size_t samples, Rng& rng) {
  SuiteResult r("reduction witness verifies and round-trips");
  for (std::size_t i = 0; i < samples; ++i) {
    const GroupSpec spec(static_cast<std::size_t>(uniform(rng, 1, 2)),
                         static_cast<std::size_t>(uniform(rng, 1, 2)));
    const IntPolynomial f0 = random_polynomial(rng);
    const auto z = random_point(rng, f0.variables());
    const IntPolynomial f = plant_root(f0, z);
    const auto out = compile(f, spec);
    const auto asg = witness(out, z);
    bool ok = check_system(out.system, asg, WreathGroup(spec)).satisfied;
    if (!f.is_zero()) {
      ok = ok && extract_solution(out, asg) == z &&
           asg.at(out.product_var).base(0) == oracle_ef(f, z, spec.m).e_f;
    }
    r.check(ok, "f = " + format(f));
  }
  return r;
}

inline std::vector<SuiteResult> run_all(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t heavy = std::max<std::size_t>(1, samples / 5);
  return {laurent_ring_axioms(samples, rng),   valuation_laws(samples, rng),
          decomposition_recomposes(heavy, rng), wreath_group_axioms(samples, rng),
          centralizer_laws(samples, rng),       nested_group_axioms(samples, rng),
          nested_flat_agreement(samples, rng),  flatten_equivalence(heavy, rng),
          oracle_equivalence(samples, rng),     reduction_soundness(heavy, rng)};
}

}  // namespace wreathdp::selftest
