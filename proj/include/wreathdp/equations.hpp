#pragma once

// Group words, equations and systems of equations over a group context,
// together with evaluation, commutator flattening and the text formats.
//
// System file: one equation per line, `word = word`; factors are
// juxtaposed, `^` takes an integer power, `[u, v]` is a commutator,
// element constants are written in braces, `1` is the empty word and `#`
// starts a comment. Assignment file: lines `name := <element literal>`.

#include "wreathdp/cursor.hpp"
#include "wreathdp/errors.hpp"
#include "wreathdp/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace wreathdp {

template <class E>
class Word;

template <class E>
struct LiteralNode {
  std::string name;
  int sign = 1;
  friend bool operator==(const LiteralNode&, const LiteralNode&) = default;
};

template <class E>
struct ConstantNode {
  E value;
  int sign = 1;
  friend bool operator==(const ConstantNode&, const ConstantNode&) = default;
};

template <class E>
struct ConcatNode {
  std::vector<Word<E>> factors;
  friend bool operator==(const ConcatNode&, const ConcatNode&) = default;
};

template <class E>
struct CommutatorNode {
  Word<E> left;
  Word<E> right;
  friend bool operator==(const CommutatorNode&, const CommutatorNode&) = default;
};

template <class E>
struct PowerNode {
  Word<E> base;
  std::int64_t exponent;
  friend bool operator==(const PowerNode&, const PowerNode&) = default;
};

inline bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

/// Immutable word tree. All construction goes through the factories, which
/// keep a canonical shape (no nested or singleton concatenations, signs on
/// atoms instead of ^-1, merged powers), so structural equality is stable
/// under printing and re-parsing.
template <class E>
class Word {
 public:
  using Node = std::variant<LiteralNode<E>, ConstantNode<E>, ConcatNode<E>,
                            CommutatorNode<E>, PowerNode<E>>;

  /// The empty word.
  Word() : node_(std::make_shared<const Node>(ConcatNode<E>{})) {}

  static Word identity() { return Word(); }

  static Word var(std::string name, int sign = 1) {
    if (!is_valid_variable_name(name)) {
      throw UsageError("invalid variable name '" + name + "'");
    }
    return Word(LiteralNode<E>{std::move(name), sign < 0 ? -1 : 1});
  }

  static Word constant(E value, int sign = 1) {
    return Word(ConstantNode<E>{std::move(value), sign < 0 ? -1 : 1});
  }

  static Word concat(const std::vector<Word>& factors) {
    std::vector<Word> flat;
    for (const auto& f : factors) {
      if (const auto* c = std::get_if<ConcatNode<E>>(&f.node())) {
        flat.insert(flat.end(), c->factors.begin(), c->factors.end());
      } else {
        flat.push_back(f);
      }
    }
    if (flat.size() == 1) return flat.front();
    return Word(ConcatNode<E>{std::move(flat)});
  }

  static Word commutator(Word left, Word right) {
    return Word(CommutatorNode<E>{std::move(left), std::move(right)});
  }

  static Word power(const Word& w, std::int64_t n) {
    if (n == 0 || w.is_identity()) return identity();
    if (n == 1) return w;
    if (const auto* p = std::get_if<PowerNode<E>>(&w.node())) {
      return power(p->base, p->exponent * n);
    }
    if (w.is_atom()) {
      if (n == -1) return w.inverse();
      if (w.atom_sign() < 0) return power(w.inverse(), -n);
    }
    return Word(PowerNode<E>{w, n});
  }

  Word inverse() const {
    return std::visit(
        [this](const auto& n) -> Word {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LiteralNode<E>>) {
            return Word(LiteralNode<E>{n.name, -n.sign});
          } else if constexpr (std::is_same_v<T, ConstantNode<E>>) {
            return Word(ConstantNode<E>{n.value, -n.sign});
          } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
            std::vector<Word> rev;
            rev.reserve(n.factors.size());
            for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) {
              rev.push_back(it->inverse());
            }
            return concat(rev);
          } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
            return commutator(n.right, n.left);
          } else {
            return power(n.base, -n.exponent);
          }
        },
        *node_);
  }

  const Node& node() const noexcept { return *node_; }

  bool is_identity() const {
    const auto* c = std::get_if<ConcatNode<E>>(node_.get());
    return c != nullptr && c->factors.empty();
  }

  bool is_atom() const {
    return std::holds_alternative<LiteralNode<E>>(*node_) ||
           std::holds_alternative<ConstantNode<E>>(*node_);
  }

  bool is_variable() const { return std::holds_alternative<LiteralNode<E>>(*node_); }

  /// True if no commutator or power nodes occur.
  bool is_flat() const {
    if (is_atom()) return true;
    if (const auto* c = std::get_if<ConcatNode<E>>(node_.get())) {
      return std::all_of(c->factors.begin(), c->factors.end(),
                         [](const Word& f) { return f.is_flat(); });
    }
    return false;
  }

  void collect_variables(std::set<std::string>& out) const {
    std::visit(
        [&out](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LiteralNode<E>>) {
            out.insert(n.name);
          } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
            for (const auto& f : n.factors) f.collect_variables(out);
          } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
            n.left.collect_variables(out);
            n.right.collect_variables(out);
          } else if constexpr (std::is_same_v<T, PowerNode<E>>) {
            n.base.collect_variables(out);
          }
        },
        *node_);
  }

  std::size_t size() const {
    return std::visit(
        [](const auto& n) -> std::size_t {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ConcatNode<E>>) {
            std::size_t s = 0;
            for (const auto& f : n.factors) s += f.size();
            return s;
          } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
            return 1 + n.left.size() + n.right.size();
          } else if constexpr (std::is_same_v<T, PowerNode<E>>) {
            return 1 + n.base.size();
          } else {
            return 1;
          }
        },
        *node_);
  }

  friend bool operator==(const Word& a, const Word& b) {
    return a.node_ == b.node_ || *a.node_ == *b.node_;
  }

 private:
  explicit Word(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  int atom_sign() const {
    if (const auto* l = std::get_if<LiteralNode<E>>(node_.get())) return l->sign;
    return std::get<ConstantNode<E>>(*node_).sign;
  }

  std::shared_ptr<const Node> node_;
};

/// An equation `lhs = 1`. Authored `w = r` equations are stored as w·r^-1.
template <class E>
struct Equation {
  Word<E> lhs;

  static Equation make(const Word<E>& w, const Word<E>& rhs) {
    return {Word<E>::concat({w, rhs.inverse()})};
  }

  friend bool operator==(const Equation&, const Equation&) = default;
};

template <class E>
class System {
 public:
  void add(Equation<E> eq) {
    eq.lhs.collect_variables(declared_);
    equations_.push_back(std::move(eq));
  }

  void add(const Word<E>& lhs, const Word<E>& rhs) {
    add(Equation<E>::make(lhs, rhs));
  }

  void declare(const std::string& name) {
    if (!is_valid_variable_name(name)) {
      throw UsageError("invalid variable name '" + name + "'");
    }
    declared_.insert(name);
  }

  void append(const System& other) {
    for (const auto& eq : other.equations_) add(eq);
    declared_.insert(other.declared_.begin(), other.declared_.end());
  }

  const std::vector<Equation<E>>& equations() const noexcept { return equations_; }
  const std::set<std::string>& declared() const noexcept { return declared_; }
  std::size_t size() const noexcept { return equations_.size(); }
  bool empty() const noexcept { return equations_.empty(); }

  friend bool operator==(const System&, const System&) = default;

 private:
  std::vector<Equation<E>> equations_;
  std::set<std::string> declared_;
};

template <class E>
using Assignment = std::map<std::string, E>;

/// A fresh variable `name` determined by the other variables: name = body.
template <class E>
struct Definition {
  std::string name;
  Word<E> body;

  Equation<E> equation() const {
    return Equation<E>::make(Word<E>::var(name), body);
  }
};

/// Deterministic fresh names: `stem1`, `stem2`, ... with one counter per
/// stem, skipping reserved names.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> reserved)
      : used_(std::move(reserved)) {}

  std::string fresh(const std::string& stem) {
    auto& counter = counters_[stem];
    std::string name;
    do {
      name = stem + std::to_string(++counter);
    } while (used_.count(name) != 0);
    used_.insert(name);
    return name;
  }

  void reserve(const std::string& name) { used_.insert(name); }

 private:
  std::map<std::string, std::size_t> counters_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

template <GroupContext G>
typename G::element_type evaluate(const Word<typename G::element_type>& w,
                                  const Assignment<typename G::element_type>& asg,
                                  const G& grp) {
  using E = typename G::element_type;
  return std::visit(
      [&](const auto& n) -> E {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralNode<E>>) {
          auto it = asg.find(n.name);
          if (it == asg.end()) {
            throw PreconditionError("unbound variable '" + n.name + "'");
          }
          grp.validate(it->second);
          return n.sign < 0 ? grp.inverse(it->second) : it->second;
        } else if constexpr (std::is_same_v<T, ConstantNode<E>>) {
          grp.validate(n.value);
          return n.sign < 0 ? grp.inverse(n.value) : n.value;
        } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
          E acc = grp.identity();
          for (const auto& f : n.factors) acc = grp.multiply(acc, evaluate(f, asg, grp));
          return acc;
        } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
          return group_commutator(grp, evaluate(n.left, asg, grp),
                                  evaluate(n.right, asg, grp));
        } else {
          return group_power(grp, evaluate(n.base, asg, grp), n.exponent);
        }
      },
      w.node());
}

struct CheckReport {
  bool satisfied = true;
  std::vector<std::size_t> failing;  // 0-based equation indices
};

template <GroupContext G>
CheckReport check_system(const System<typename G::element_type>& sys,
                         const Assignment<typename G::element_type>& asg,
                         const G& grp) {
  for (const auto& name : sys.declared()) {
    if (asg.find(name) == asg.end()) {
      throw PreconditionError("unbound variable '" + name + "'");
    }
  }
  CheckReport report;
  const auto id = grp.identity();
  for (std::size_t i = 0; i < sys.equations().size(); ++i) {
    if (!(evaluate(sys.equations()[i].lhs, asg, grp) == id)) {
      report.satisfied = false;
      report.failing.push_back(i);
    }
  }
  return report;
}

/// Evaluates definitions in order, binding each defined name.
template <GroupContext G>
void extend_assignment(const std::vector<Definition<typename G::element_type>>& defs,
                       Assignment<typename G::element_type>& asg, const G& grp) {
  for (const auto& d : defs) asg.insert_or_assign(d.name, evaluate(d.body, asg, grp));
}

// ---------------------------------------------------------------------------
// Flattening
// ---------------------------------------------------------------------------

template <class E>
struct FlattenResult {
  Word<E> word;                         // no commutator or power nodes
  std::vector<Definition<E>> definitions;  // fresh names in first-use order
  System<E> aux;                        // the definitions as equations
};

namespace detail {

template <class E>
Word<E> flatten_into(const Word<E>& w, NameSupply& names, const std::string& stem,
                     std::vector<Definition<E>>& defs) {
  return std::visit(
      [&](const auto& n) -> Word<E> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralNode<E>> ||
                      std::is_same_v<T, ConstantNode<E>>) {
          return w;
        } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
          std::vector<Word<E>> parts;
          parts.reserve(n.factors.size());
          for (const auto& f : n.factors) parts.push_back(flatten_into(f, names, stem, defs));
          return Word<E>::concat(parts);
        } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
          const Word<E> u = flatten_into(n.left, names, stem, defs);
          const Word<E> v = flatten_into(n.right, names, stem, defs);
          std::string t = names.fresh(stem);
          defs.push_back({t, Word<E>::concat({u.inverse(), v.inverse(), u, v})});
          return Word<E>::var(t);
        } else {
          const Word<E> u = flatten_into(n.base, names, stem, defs);
          const Word<E> step = n.exponent < 0 ? u.inverse() : u;
          const std::int64_t count = n.exponent < 0 ? -n.exponent : n.exponent;
          return Word<E>::concat(std::vector<Word<E>>(static_cast<std::size_t>(count), step));
        }
      },
      w.node());
}

}  // namespace detail

/// Replaces every commutator by a fresh variable t constrained by
/// t = u^-1 v^-1 u v over already-flattened u, v, and expands powers, so
/// nested commutators cost linear rather than exponential size.
template <class E>
FlattenResult<E> flatten(const Word<E>& w, NameSupply& names,
                         const std::string& stem = "t") {
  FlattenResult<E> out;
  out.word = detail::flatten_into(w, names, stem, out.definitions);
  for (const auto& d : out.definitions) out.aux.add(d.equation());
  return out;
}

// ---------------------------------------------------------------------------
// Changing the element representation
// ---------------------------------------------------------------------------

template <class E2, class E, class F>
Word<E2> map_constants(const Word<E>& w, const F& fn) {
  return std::visit(
      [&](const auto& n) -> Word<E2> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralNode<E>>) {
          return Word<E2>::var(n.name, n.sign);
        } else if constexpr (std::is_same_v<T, ConstantNode<E>>) {
          return Word<E2>::constant(fn(n.value), n.sign);
        } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
          std::vector<Word<E2>> parts;
          for (const auto& f : n.factors) parts.push_back(map_constants<E2>(f, fn));
          return Word<E2>::concat(parts);
        } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
          return Word<E2>::commutator(map_constants<E2>(n.left, fn),
                                      map_constants<E2>(n.right, fn));
        } else {
          return Word<E2>::power(map_constants<E2>(n.base, fn), n.exponent);
        }
      },
      w.node());
}

template <class E2, class E, class F>
System<E2> map_constants(const System<E>& sys, const F& fn) {
  System<E2> out;
  for (const auto& eq : sys.equations()) {
    out.add(Equation<E2>{map_constants<E2>(eq.lhs, fn)});
  }
  for (const auto& v : sys.declared()) out.declare(v);
  return out;
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

template <GroupContext G>
std::string serialize_word(const Word<typename G::element_type>& w, const G& grp) {
  using E = typename G::element_type;
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralNode<E>>) {
          return n.sign < 0 ? n.name + "^-1" : n.name;
        } else if constexpr (std::is_same_v<T, ConstantNode<E>>) {
          std::string s = grp.format_element(n.value);
          return n.sign < 0 ? s + "^-1" : s;
        } else if constexpr (std::is_same_v<T, ConcatNode<E>>) {
          if (n.factors.empty()) return "1";
          std::string s;
          for (std::size_t i = 0; i < n.factors.size(); ++i) {
            if (i) s += ' ';
            s += serialize_word(n.factors[i], grp);
          }
          return s;
        } else if constexpr (std::is_same_v<T, CommutatorNode<E>>) {
          return "[" + serialize_word(n.left, grp) + ", " +
                 serialize_word(n.right, grp) + "]";
        } else {
          std::string base = serialize_word(n.base, grp);
          if (std::holds_alternative<ConcatNode<E>>(n.base.node())) {
            base = "(" + base + ")";
          }
          return base + "^" + std::to_string(n.exponent);
        }
      },
      w.node());
}

namespace detail {

template <GroupContext G>
class WordParser {
 public:
  using E = typename G::element_type;

  WordParser(Cursor& cur, const G& grp) : cur_(cur), grp_(grp) {}

  Word<E> word() {
    std::vector<Word<E>> factors;
    while (starts_factor(cur_.peek())) factors.push_back(factor());
    if (factors.empty()) cur_.fail("expected a word");
    return Word<E>::concat(factors);
  }

 private:
  static bool starts_factor(char c) {
    return c == '{' || c == '[' || c == '(' || c == '1' || c == '_' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Word<E> factor() {
    Word<E> base = primary();
    while (cur_.accept('^')) base = Word<E>::power(base, cur_.small_integer());
    return base;
  }

  Word<E> primary() {
    const char c = cur_.peek();
    if (c == '{') return Word<E>::constant(grp_.parse_element(cur_));
    if (c == '[') {
      cur_.take();
      Word<E> acc = word();
      cur_.expect(',');
      do {
        acc = Word<E>::commutator(std::move(acc), word());
      } while (cur_.accept(','));
      cur_.expect(']');
      return acc;
    }
    if (c == '(') {
      cur_.take();
      Word<E> inner = word();
      cur_.expect(')');
      return inner;
    }
    if (c == '1') {
      cur_.take();
      if (std::isalnum(static_cast<unsigned char>(cur_.raw_peek()))) {
        cur_.fail("identifiers cannot start with a digit");
      }
      return Word<E>::identity();
    }
    return Word<E>::var(cur_.identifier());
  }

  Cursor& cur_;
  const G& grp_;
};

/// Splits text into (1-based line number, content without comment) pairs,
/// skipping blank lines.
inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    out.emplace_back(lineno, line);
  }
  return out;
}

}  // namespace detail

template <GroupContext G>
Word<typename G::element_type> parse_word(std::string_view text, const G& grp) {
  Cursor cur(text);
  auto w = detail::WordParser<G>(cur, grp).word();
  cur.expect_end();
  return w;
}

template <GroupContext G>
System<typename G::element_type> parse_system(std::string_view text, const G& grp) {
  System<typename G::element_type> sys;
  for (const auto& [lineno, line] : detail::content_lines(text)) {
    Cursor cur(line, lineno);
    detail::WordParser<G> parser(cur, grp);
    auto lhs = parser.word();
    cur.expect('=');
    auto rhs = parser.word();
    cur.expect_end();
    sys.add(lhs, rhs);
  }
  return sys;
}

/// One `lhs = 1` line per equation, preceded by `# ` header lines.
template <GroupContext G>
std::string serialize_system(const System<typename G::element_type>& sys, const G& grp,
                             const std::vector<std::string>& header = {}) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  for (const auto& eq : sys.equations()) out += serialize_word(eq.lhs, grp) + " = 1\n";
  return out;
}

template <GroupContext G>
Assignment<typename G::element_type> parse_assignment(std::string_view text,
                                                      const G& grp) {
  Assignment<typename G::element_type> asg;
  for (const auto& [lineno, line] : detail::content_lines(text)) {
    Cursor cur(line, lineno);
    const std::size_t col = cur.column();
    std::string name = cur.identifier();
    if (name.empty()) cur.fail("expected a variable name");
    cur.expect(":=");
    auto value = grp.parse_element(cur);
    cur.expect_end();
    if (!asg.emplace(name, std::move(value)).second) {
      throw ParseError(lineno, col, "variable '" + name + "' assigned twice");
    }
  }
  return asg;
}

template <GroupContext G>
std::string serialize_assignment(const Assignment<typename G::element_type>& asg,
                                 const G& grp,
                                 const std::vector<std::string>& header = {}) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  for (const auto& [name, value] : asg) {
    out += name + " := " + grp.format_element(value) + "\n";
  }
  return out;
}

}  // namespace wreathdp
