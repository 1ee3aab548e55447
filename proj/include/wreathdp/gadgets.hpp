#pragma once

// Equation systems defining subsets of G = Z^n wr Z^m, each paired with a
// constructive witness builder for its positive direction. All constants
// use a = a1 and b = b1.

#include "wreathdp/equations.hpp"
#include "wreathdp/laurent.hpp"
#include "wreathdp/wreath.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wreathdp::gadgets {

using Elem = WreathElement;
using W = Word<WreathElement>;

struct Gadget {
  std::vector<std::string> interface_vars;
  std::vector<std::string> aux_vars;
  System<WreathElement> system;
  /// Aux variables fixed by the others, in evaluation order.
  std::vector<Definition<WreathElement>> definitions;

  std::vector<std::string> header() const {
    std::string line = "interface:";
    for (const auto& v : interface_vars) line += " " + v;
    return {line};
  }
};

inline W a1(GroupSpec spec) { return W::constant(WreathElement::a(spec, 0)); }
inline W b1(GroupSpec spec) { return W::constant(WreathElement::b(spec, 0)); }

/// x in N  ⟺  [x, b1] = 1.
inline Gadget in_N(const std::string& x, GroupSpec spec) {
  Gadget g;
  g.interface_vars = {x};
  g.system.add(W::commutator(W::var(x), b1(spec)), W::identity());
  return g;
}

/// x in A  ⟺  [x, a1] = 1.
inline Gadget in_A(const std::string& x, GroupSpec spec) {
  Gadget g;
  g.interface_vars = {x};
  g.system.add(W::commutator(W::var(x), a1(spec)), W::identity());
  return g;
}

struct CyclicGadget : Gadget {
  std::string x;
  std::string z;
};

/// x in <a1>  ⟺  ∃z: [x, a1] = 1, [z, b1] = 1, [b1, x] = [z, a1].
inline CyclicGadget cyclic(const std::string& x, GroupSpec spec, NameSupply& names) {
  CyclicGadget g;
  g.x = x;
  g.z = names.fresh("cyc_z_");
  g.interface_vars = {x};
  g.aux_vars = {g.z};
  const W xv = W::var(x);
  const W zv = W::var(g.z);
  g.system.add(W::commutator(xv, a1(spec)), W::identity());
  g.system.add(W::commutator(zv, b1(spec)), W::identity());
  g.system.add(W::commutator(b1(spec), xv), W::commutator(zv, a1(spec)));
  return g;
}

/// {x ↦ a1^γ, z ↦ b1^{s}} with s·(a1 - 1) = a1^γ - 1.
inline Assignment<WreathElement> witness_cyclic(std::int64_t gamma, GroupSpec spec,
                                                const CyclicGadget& g) {
  Assignment<WreathElement> asg;
  asg.emplace(g.x, WreathElement::a(spec, 0, gamma));
  asg.emplace(g.z, WreathElement::b(spec, 0, geom_series(gamma, spec.m)));
  return asg;
}

struct DeltaBlock {
  Monomial beta;
  std::string x;  // x_β = [y_β, a1 (β1 times), ..., am (βm times)]
  std::string y;  // y_β in N
};

struct DeltaPowerGadget : Gadget {
  std::string x;
  std::size_t k = 0;
  std::vector<DeltaBlock> blocks;
};

/// Left-normed [head, atoms...] defined into `target`: the inner levels are
/// flattened into fresh variables, the outermost commutator is kept.
inline void define_left_normed(const std::string& target, const W& head,
                               const std::vector<W>& atoms, NameSupply& names,
                               const std::string& stem, Gadget& g) {
  if (atoms.empty()) {
    Definition<WreathElement> d{target, head};
    g.system.add(d.equation());
    g.definitions.push_back(std::move(d));
    return;
  }
  W inner = head;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) inner = W::commutator(inner, atoms[i]);
  auto flat = flatten(inner, names, stem);
  for (auto& d : flat.definitions) {
    g.aux_vars.push_back(d.name);
    g.system.add(d.equation());
    g.definitions.push_back(std::move(d));
  }
  Definition<WreathElement> last{target, W::commutator(flat.word, atoms.back())};
  g.system.add(last.equation());
  g.definitions.push_back(std::move(last));
}

/// x in N^{Δ^k}  ⟺  ∃ x_β, y_β (|β| = k):
///   x = Π x_β,  [y_β, b1] = 1,  x_β = [y_β, a1, ..., a1, ..., am, ..., am]_β.
inline DeltaPowerGadget delta_power(const std::string& x, std::size_t k, GroupSpec spec,
                                    NameSupply& names) {
  DeltaPowerGadget g;
  g.x = x;
  g.k = k;
  g.interface_vars = {x};
  std::vector<W> product;
  for (const Monomial& beta : compositions(spec.m, k)) {
    DeltaBlock blk{beta, names.fresh("dp_x_"), names.fresh("dp_y_")};
    g.aux_vars.push_back(blk.x);
    g.aux_vars.push_back(blk.y);
    g.system.add(W::commutator(W::var(blk.y), b1(spec)), W::identity());
    std::vector<W> atoms;
    for (std::size_t i = 0; i < spec.m; ++i) {
      for (std::int64_t r = 0; r < beta[i]; ++r) {
        atoms.push_back(W::constant(WreathElement::a(spec, i)));
      }
    }
    define_left_normed(blk.x, W::var(blk.y), atoms, names, "dp_t_", g);
    product.push_back(W::var(blk.x));
    g.blocks.push_back(std::move(blk));
  }
  g.system.add(W::var(x), W::concat(product));
  return g;
}

/// Aux values for x ↦ g: y_β from the Δ^k decomposition of each coordinate,
/// x_β = y_β^{c_β} and the chain variables by evaluation.
inline Assignment<WreathElement> witness_delta_power(const WreathElement& g,
                                                     const DeltaPowerGadget& gadget) {
  const GroupSpec spec = g.spec();
  if (!in_N(g)) {
    throw PreconditionError("delta-power witness: element is not in N");
  }
  std::vector<DeltaDecomposition> parts;
  for (std::size_t j = 0; j < spec.n; ++j) {
    const AugValuation v = aug_valuation(g.base(j));
    if (!v.at_least(gadget.k)) {
      throw PreconditionError("delta-power witness: coordinate b" + std::to_string(j + 1) +
                              " has valuation " + v.to_string() + " < " +
                              std::to_string(gadget.k));
    }
    parts.push_back(delta_decompose(g.base(j), gadget.k));
  }
  Assignment<WreathElement> asg;
  for (const auto& blk : gadget.blocks) {
    std::vector<LaurentPoly> coords(spec.n, LaurentPoly(spec.m));
    for (std::size_t j = 0; j < spec.n; ++j) {
      if (auto it = parts[j].find(blk.beta); it != parts[j].end()) coords[j] = it->second;
    }
    asg.emplace(blk.y, WreathElement::from_base(spec, std::move(coords)));
  }
  extend_assignment(gadget.definitions, asg, WreathGroup(spec));
  return asg;
}

}  // namespace wreathdp::gadgets
