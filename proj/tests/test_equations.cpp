#include "wreathdp/equations.hpp"
#include "wreathdp/selftest.hpp"
#include "wreathdp/wreath.hpp"

#include <gtest/gtest.h>

using namespace wreathdp;

namespace {

using W = Word<WreathElement>;
const GroupSpec S21(2, 1);
const GroupSpec S12(1, 2);
const WreathGroup G21(S21);
const WreathGroup G12(S12);

WreathElement a1(GroupSpec s = S21) { return WreathElement::a(s, 0); }
WreathElement b1(GroupSpec s = S21) { return WreathElement::b(s, 0); }

}  // namespace

TEST(WordConstruction, CanonicalShapes) {
  const auto x = W::var("x"), y = W::var("y");
  EXPECT_EQ(W::concat({x, W::concat({y, x}), W::identity()}), W::concat({x, y, x}));
  EXPECT_EQ(W::concat({x}), x);
  EXPECT_TRUE(W::concat({}).is_identity());
  EXPECT_EQ(W::power(x, -1), W::var("x", -1));
  EXPECT_EQ(W::power(W::power(x, 2), 3), W::power(x, 6));
  EXPECT_EQ(W::power(W::var("x", -1), 2), W::power(x, -2));
  EXPECT_TRUE(W::power(x, 0).is_identity());
  EXPECT_EQ(W::power(x, 1), x);
  EXPECT_EQ(W::commutator(x, y).inverse(), W::commutator(y, x));
  EXPECT_EQ(x.inverse().inverse(), x);
}

TEST(WordConstruction, VariableNames) {
  EXPECT_NO_THROW(W::var("x1"));
  EXPECT_NO_THROW(W::var("dp_t_12"));
  EXPECT_NO_THROW(W::var("_tmp"));
  EXPECT_THROW(W::var(""), UsageError);
  EXPECT_THROW(W::var("1x"), UsageError);
  EXPECT_THROW(W::var("x-y"), UsageError);
}

TEST(WordConstruction, CollectVariablesAndSize) {
  const auto w = W::concat({W::commutator(W::var("x"), W::constant(a1())),
                            W::power(W::concat({W::var("y"), W::var("x", -1)}), 3)});
  std::set<std::string> vars;
  w.collect_variables(vars);
  EXPECT_EQ(vars, (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(w.size(), 6u);
  EXPECT_FALSE(w.is_flat());
  EXPECT_TRUE(W::concat({W::var("x"), W::constant(b1())}).is_flat());
}

TEST(Evaluate, Examples) {
  const Assignment<WreathElement> asg{{"x", b1()}, {"y", a1()}};
  EXPECT_EQ(evaluate(W::commutator(W::var("x"), W::var("y")), asg, G21),
            parse_wreath_element("{ b1: a1 - 1 }", S21));
  EXPECT_EQ(evaluate(W::identity(), asg, G21), WreathElement::identity(S21));
  EXPECT_EQ(evaluate(W::power(W::var("y"), -2), asg, G21), WreathElement::a(S21, 0, -2));
  EXPECT_EQ(evaluate(W::var("x", -1), asg, G21), inverse(b1()));
  EXPECT_EQ(evaluate(W::constant(a1(), -1), {}, G21), inverse(a1()));
}

TEST(Evaluate, Errors) {
  try {
    evaluate(W::concat({W::var("x"), W::var("zz")}), {{"x", a1()}}, G21);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("'zz'"), std::string::npos);
  }
  EXPECT_THROW(evaluate(W::var("x"), {{"x", a1(S12)}}, G21), UsageError);
  EXPECT_THROW(evaluate(W::constant(a1(S12)), {}, G21), UsageError);
}

TEST(Evaluate, ConcatIsHomomorphism) {
  selftest::Rng rng(31);
  const std::vector<std::string> vars{"x", "y"};
  for (int i = 0; i < 200; ++i) {
    const std::vector<WreathElement> consts{selftest::random_element(rng, S21)};
    const auto u = selftest::random_word(rng, 3, vars, consts);
    const auto v = selftest::random_word(rng, 3, vars, consts);
    const Assignment<WreathElement> asg{{"x", selftest::random_element(rng, S21)},
                                        {"y", selftest::random_element(rng, S21)}};
    EXPECT_EQ(evaluate(W::concat({u, v}), asg, G21), evaluate(u, asg, G21) * evaluate(v, asg, G21));
    EXPECT_EQ(evaluate(u.inverse(), asg, G21), inverse(evaluate(u, asg, G21)));
  }
}

TEST(CheckSystem, Examples) {
  EXPECT_TRUE(check_system(System<WreathElement>{}, {}, G12).satisfied);

  System<WreathElement> sys;
  sys.add(W::commutator(W::var("x"), W::constant(b1(S12))), W::identity());
  EXPECT_TRUE(check_system(sys, {{"x", parse_wreath_element("{ b2: a1 }", S12)}}, G12).satisfied);

  const auto bad = check_system(sys, {{"x", a1(S12)}}, G12);
  EXPECT_FALSE(bad.satisfied);
  EXPECT_EQ(bad.failing, std::vector<std::size_t>{0});
  // The failing value: [a1, b1] = [b1, a1]^-1 = b1^{1 - a1}.
  EXPECT_EQ(commutator(a1(S12), b1(S12)), parse_wreath_element("{ b1: 1 - a1 }", S12));
}

TEST(CheckSystem, ReportsEveryFailingIndex) {
  System<WreathElement> sys;
  sys.add(W::var("x"), W::constant(a1()));
  sys.add(W::var("x"), W::var("x"));
  sys.add(W::var("x"), W::constant(b1()));
  const auto r = check_system(sys, {{"x", b1()}}, G21);
  EXPECT_EQ(r.failing, (std::vector<std::size_t>{0}));
  const auto r2 = check_system(sys, {{"x", WreathElement::identity(S21)}}, G21);
  EXPECT_EQ(r2.failing, (std::vector<std::size_t>{0, 2}));
}

TEST(CheckSystem, UnboundDeclaredVariable) {
  System<WreathElement> sys;
  sys.add(W::var("x"), W::identity());
  EXPECT_THROW(check_system(sys, {}, G21), PreconditionError);
}

TEST(SystemModel, AuthoredEquationsNormalize) {
  System<WreathElement> sys;
  sys.add(W::var("x"), W::concat({W::var("y"), W::constant(a1())}));
  ASSERT_EQ(sys.size(), 1u);
  EXPECT_EQ(sys.equations()[0].lhs,
            W::concat({W::var("x"), W::constant(a1(), -1), W::var("y", -1)}));
  EXPECT_EQ(sys.declared(), (std::set<std::string>{"x", "y"}));
}

TEST(Flatten, Examples) {
  NameSupply names;
  const auto lit = flatten(W::var("x"), names);
  EXPECT_EQ(lit.word, W::var("x"));
  EXPECT_TRUE(lit.aux.empty());

  NameSupply n1;
  const auto x = W::var("x"), y = W::var("y"), z = W::var("z");
  const auto one = flatten(W::commutator(x, y), n1);
  EXPECT_EQ(one.word, W::var("t1"));
  ASSERT_EQ(one.definitions.size(), 1u);
  EXPECT_EQ(one.definitions[0].body, W::concat({x.inverse(), y.inverse(), x, y}));

  NameSupply n2;
  const auto two = flatten(W::commutator(W::commutator(x, y), z), n2);
  EXPECT_EQ(two.word, W::var("t2"));
  ASSERT_EQ(two.definitions.size(), 2u);
  EXPECT_EQ(two.definitions[0].name, "t1");
  EXPECT_EQ(two.definitions[1].body,
            W::concat({W::var("t1", -1), z.inverse(), W::var("t1"), z}));
  EXPECT_EQ(serialize_system(two.aux, G21), "t1 y^-1 x^-1 y x = 1\nt2 z^-1 t1^-1 z t1 = 1\n");

  const Assignment<WreathElement> asg{{"x", b1()}, {"y", a1()}, {"z", WreathElement::a(S21, 1)}};
  Assignment<WreathElement> ext = asg;
  extend_assignment(two.definitions, ext, G21);
  EXPECT_EQ(evaluate(two.word, ext, G21),
            evaluate(W::commutator(W::commutator(x, y), z), asg, G21));
}

TEST(Flatten, SkipsReservedNames) {
  NameSupply names({"t1"});
  const auto r = flatten(W::commutator(W::var("t1"), W::var("y")), names);
  EXPECT_EQ(r.word, W::var("t2"));
}

TEST(Flatten, ExpandsPowers) {
  NameSupply names;
  const auto r = flatten(W::power(W::var("x"), -3), names);
  EXPECT_EQ(r.word, W::concat({W::var("x", -1), W::var("x", -1), W::var("x", -1)}));
  EXPECT_TRUE(r.word.is_flat());
}

TEST(Flatten, LinearSizeOnDeepChains) {
  // [x, y, y, ..., y] with 30 levels would have about 2^30 letters unrolled.
  W w = W::var("x");
  for (int i = 0; i < 30; ++i) w = W::commutator(w, W::var("y"));
  NameSupply names;
  const auto r = flatten(w, names);
  EXPECT_EQ(r.definitions.size(), 30u);
  std::size_t total = 0;
  for (const auto& d : r.definitions) total += d.body.size();
  EXPECT_EQ(total, 4u * 30u);
}

TEST(Flatten, EquivalenceOnRandomWords) {
  selftest::Rng rng(32);
  const auto r = selftest::flatten_equivalence(200, rng);
  EXPECT_EQ(r.violations, 0u) << r.first_failure;
}

TEST(Flatten, SolutionsExtendUniquely) {
  // Any assignment satisfying the aux system agrees with extend_assignment on
  // the fresh names: each definition pins its name given earlier values.
  selftest::Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const std::vector<WreathElement> consts{selftest::random_element(rng, S21)};
    const auto w = selftest::random_word(rng, 4, {"x", "y"}, consts);
    NameSupply names({"x", "y"});
    const auto f = flatten(w, names);
    Assignment<WreathElement> asg{{"x", selftest::random_element(rng, S21)},
                                  {"y", selftest::random_element(rng, S21)}};
    extend_assignment(f.definitions, asg, G21);
    for (const auto& d : f.definitions) {
      Assignment<WreathElement> other = asg;
      other.at(d.name) = other.at(d.name) * a1();
      EXPECT_FALSE(check_system(f.aux, other, G21).satisfied);
    }
  }
}

TEST(SystemText, EmptyAndGrammarCases) {
  EXPECT_TRUE(parse_system("", G21).empty());
  EXPECT_TRUE(parse_system("# only a comment\n\n   \n", G21).empty());

  const auto sys = parse_system("[x, {active:(1,0); }] = 1", G21);
  ASSERT_EQ(sys.size(), 1u);
  EXPECT_EQ(sys.equations()[0].lhs, W::commutator(W::var("x"), W::constant(a1())));

  const auto sys2 = parse_system("x^2 (y {b1: 3})^-1 = [x, y]  # trailing comment", G21);
  ASSERT_EQ(sys2.size(), 1u);
  EXPECT_EQ(sys2.declared(), (std::set<std::string>{"x", "y"}));
  const Assignment<WreathElement> asg{{"x", a1()}, {"y", b1()}};
  const auto lhs = power(a1(), 2) * inverse(b1() * WreathElement::b(S21, 0, LaurentPoly::constant(2, 3)));
  EXPECT_EQ(evaluate(sys2.equations()[0].lhs, asg, G21),
            lhs * inverse(commutator(a1(), b1())));

  const auto sys3 = parse_system("[x, y, z] = 1", G21);
  EXPECT_EQ(sys3.equations()[0].lhs,
            W::commutator(W::commutator(W::var("x"), W::var("y")), W::var("z")));
  EXPECT_THROW(parse_system("[x] = 1", G21), ParseError);
  EXPECT_THROW(parse_system("[x, y,] = 1", G21), ParseError);
}

TEST(SystemText, ErrorsCarryLocation) {
  try {
    parse_system("x = 1\n\n  [x, = 1\n", G21);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(parse_system("x 1", G21), ParseError);
  EXPECT_THROW(parse_system("x = ", G21), ParseError);
  EXPECT_THROW(parse_system("x = y = z", G21), ParseError);
  EXPECT_THROW(parse_system("{ b3: 1 } = 1", G21), ParseError);
  EXPECT_THROW(parse_system("12x = 1", G21), ParseError);
  EXPECT_THROW(parse_system("x^y = 1", G21), ParseError);
}

TEST(SystemText, RoundTripRandom) {
  selftest::Rng rng(34);
  for (int i = 0; i < 200; ++i) {
    System<WreathElement> sys;
    const std::vector<WreathElement> consts{selftest::random_element(rng, S21),
                                            selftest::random_element(rng, S21)};
    for (int e = 0; e < 3; ++e) {
      sys.add(selftest::random_word(rng, 4, {"x", "y", "t1"}, consts),
              selftest::random_word(rng, 2, {"x", "y", "t1"}, consts));
    }
    const auto text = serialize_system(sys, G21, {"random"});
    const auto back = parse_system(text, G21);
    EXPECT_EQ(back.equations().size(), sys.equations().size());
    for (std::size_t k = 0; k < sys.size(); ++k) {
      EXPECT_EQ(back.equations()[k].lhs, sys.equations()[k].lhs) << text;
    }
    EXPECT_EQ(serialize_system(back, G21, {"random"}), text);
  }
}

TEST(AssignmentText, RoundTripAndErrors) {
  const Assignment<WreathElement> asg{{"x", a1()}, {"cyc_z_1", b1()}};
  const auto text = serialize_assignment(asg, G21);
  EXPECT_EQ(text, "cyc_z_1 := { active: (0,0) ; b1: 1 }\nx := { active: (1,0) ; }\n");
  EXPECT_EQ(parse_assignment(text, G21), asg);
  EXPECT_THROW(parse_assignment("x := {}\nx := {}\n", G21), ParseError);
  EXPECT_THROW(parse_assignment("x = {}\n", G21), ParseError);
  EXPECT_THROW(parse_assignment(":= {}\n", G21), ParseError);
}
