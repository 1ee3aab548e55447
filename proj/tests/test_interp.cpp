#include "wreathdp/interp.hpp"
#include "wreathdp/selftest.hpp"

#include <gtest/gtest.h>

using namespace wreathdp;

namespace {

using NW = Word<NestedElement>;
using Z = std::vector<std::int64_t>;

const IteratedSpec K111({1, 1, 1});
const IteratedSpec K12({1, 2});

NestedElement N(std::string_view text, const IteratedSpec& spec) {
  return parse_nested_element(text, spec);
}

NestedElement leaf(std::initializer_list<int> v) {
  NestedElement::Vector out;
  for (int c : v) out.emplace_back(c);
  return NestedElement::leaf(std::move(out));
}

}  // namespace

TEST(IteratedSpecTest, Validation) {
  EXPECT_THROW(IteratedSpec(std::vector<std::size_t>{}), UsageError);
  EXPECT_THROW(IteratedSpec({1, 0}), UsageError);
  EXPECT_EQ(K111.inner(), IteratedSpec({1, 1}));
  EXPECT_THROW(IteratedSpec({2}).inner(), UsageError);
  EXPECT_EQ(to_iterated(GroupSpec(2, 3)), IteratedSpec({2, 3}));
}

TEST(NestedElementTest, NormalForm) {
  const auto id = NestedElement::identity(K12);
  const auto g = NestedElement::wreath(leaf({0}), {{leaf({2}), {NestedElement::Vector{1, 0}}},
                                                 {leaf({-1}), {NestedElement::Vector{0, 3}}},
                                                 {leaf({2}), {NestedElement::Vector{-1, 0}}}});
  ASSERT_EQ(g.base().size(), 1u);
  EXPECT_EQ(g.base()[0].position, leaf({-1}));
  EXPECT_TRUE(id.is_identity());
  EXPECT_FALSE(g.is_identity());
  EXPECT_THROW(NestedElement::wreath(leaf({0}), {{NestedElement::identity(K12), {1, 0}}}), UsageError);
}

TEST(NestedMultiply, Examples) {
  const NestedGroup grp(K111);
  const auto id = grp.identity();
  EXPECT_EQ(nested_multiply(id, id), id);
  selftest::Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    const auto g = selftest::random_nested(rng, K111);
    EXPECT_TRUE(nested_multiply(g, nested_inverse(g)).is_identity()) << format(g);
  }
}

TEST(NestedMultiply, DifferentDepthsRejected) {
  EXPECT_THROW(nested_multiply(NestedElement::identity(K111), NestedElement::identity(K12)), UsageError);
  EXPECT_THROW(nested_multiply(leaf({1}), leaf({1, 2})), UsageError);
}

TEST(NestedMultiply, AgreesWithFlat) {
  selftest::Rng rng(62);
  const auto r = selftest::nested_flat_agreement(500, rng);
  EXPECT_EQ(r.violations, 0u) << r.first_failure;
}

TEST(NestedMultiply, FlatBridgeHandExample) {
  const GroupSpec s(1, 1);
  const auto g = parse_wreath_element("{ active: (1) ; b1: 1 }", s);
  const auto n = to_nested(g);
  EXPECT_EQ(format(n), "{ active: (1) ; [ (0) -> (1) ] }");
  const auto h = to_nested(WreathElement::a(s, 0, -1));
  EXPECT_EQ(format(nested_multiply(n, h)), "{ active: (0) ; [ (-1) -> (1) ] }");
  EXPECT_THROW(from_nested(NestedElement::identity(K111), s), UsageError);
}

TEST(NestedProperties, GroupAxioms) {
  selftest::Rng rng(63);
  const auto r = selftest::nested_group_axioms(1000, rng);
  EXPECT_EQ(r.violations, 0u) << r.first_failure;
}

TEST(Project, Examples) {
  EXPECT_EQ(project(NestedElement::identity(K111)), NestedElement::identity(K111.inner()));
  const NestedGroup grp(K111);
  EXPECT_TRUE(project(grp.base_generator(0)).is_identity());
  selftest::Rng rng(64);
  for (int i = 0; i < 300; ++i) {
    const auto g = selftest::random_nested(rng, K111), h = selftest::random_nested(rng, K111);
    EXPECT_EQ(project(nested_multiply(g, h)), nested_multiply(project(g), project(h)));
  }
}

TEST(NestedText, FormatAndParse) {
  EXPECT_EQ(format(leaf({1, 0})), "(1,0)");
  const auto g = N("{ active: { active: (2) ; [ (0) -> (1) ] } ; [ { active: (0) ; } -> (-3) ] }", K111);
  EXPECT_EQ(format(g), "{ active: { active: (2) ; [ (0) -> (1) ] } ; [ { active: (0) ; } -> (-3) ] }");
  EXPECT_EQ(N("{ active: (0) ; [ (1) -> (0,0) ] }", K12), NestedElement::identity(K12));
  selftest::Rng rng(65);
  for (int i = 0; i < 200; ++i) {
    const auto e = selftest::random_nested(rng, K111);
    EXPECT_EQ(N(format(e), K111), e) << format(e);
  }
}

TEST(NestedText, Errors) {
  EXPECT_THROW(N("{ active: (0) ; [ (1) -> (1) ] }", K12), ParseError);
  EXPECT_THROW(N("{ active: (0) ; [ (1) -> (1,0) ], [ (1) -> (0,1) ] }", K12), ParseError);
  EXPECT_THROW(N("{ active: (0,0) ; }", K12), ParseError);
  EXPECT_THROW(N("{ active: (0) }", K12), ParseError);
  EXPECT_THROW(N("(1)", K12), ParseError);
}

TEST(NestedGroupTest, Generators) {
  const NestedGroup grp(IteratedSpec({2, 1}));
  const auto gens = grp.generators();
  ASSERT_EQ(gens.size(), 3u);
  EXPECT_EQ(format(gens[0]), "{ active: (1,0) ; }");
  EXPECT_EQ(format(gens[2]), "{ active: (0,0) ; [ (0,0) -> (1) ] }");
  EXPECT_THROW(NestedGroup(IteratedSpec({1})).base_generator(0), UsageError);
  EXPECT_THROW(grp.validate(NestedElement::identity(K111)), UsageError);
}

TEST(LiftSystem, Examples) {
  const NestedGroup inner(IteratedSpec({1, 1}));
  const NestedGroup outer(K111);
  NameSupply names;
  EXPECT_TRUE(lift_system(System<NestedElement>{}, outer, names).empty());

  const auto c = to_nested(parse_wreath_element("{ active: (1) ; b1: a1 - 2 }", GroupSpec(1, 1)));
  System<NestedElement> sys;
  sys.add(NW::var("x"), NW::constant(c));
  const auto lifted = lift_system(sys, outer, names);
  ASSERT_EQ(lifted.size(), 2u);
  const auto ec = embed_active(c);
  EXPECT_EQ(lifted.equations()[0].lhs,
            NW::concat({NW::var("x"), NW::constant(ec, -1), NW::var("lift_t_1", -1)}));
  EXPECT_EQ(lifted.equations()[1].lhs,
            NW::commutator(NW::var("lift_t_1"), NW::constant(outer.base_generator(0))));

  // x ↦ c over H lifts with t ↦ 1.
  EXPECT_TRUE(check_system(sys, {{"x", c}}, inner).satisfied);
  EXPECT_TRUE(check_system(lifted, {{"x", ec}, {"lift_t_1", outer.identity()}}, outer).satisfied);
  // Any x in the coset ec·N also works once t absorbs the base part.
  const auto n = outer.base_generator(0);
  const auto x = nested_multiply(ec, n);
  const auto t = evaluate(NW::concat({NW::var("x"), NW::constant(ec, -1)}), {{"x", x}}, outer);
  EXPECT_TRUE(check_system(lifted, {{"x", x}, {"lift_t_1", t}}, outer).satisfied);
  // Outside the coset the commutator equation fails.
  const auto bad = embed_active(nested_multiply(c, inner.generators()[0]));
  const auto tb = evaluate(NW::concat({NW::var("x"), NW::constant(ec, -1)}), {{"x", bad}}, outer);
  EXPECT_FALSE(check_system(lifted, {{"x", bad}, {"lift_t_1", tb}}, outer).satisfied);
}

TEST(LiftSystem, SoundnessAndProjection) {
  // Random equations over H = IWP(1,1) with a constructed solution, lifted
  // to K wr H; random base perturbations keep the lift satisfied and project
  // back to the original solution.
  selftest::Rng rng(66);
  const NestedGroup inner(IteratedSpec({1, 1}));
  const NestedGroup outer(K111);
  for (int i = 0; i < 60; ++i) {
    Assignment<NestedElement> sol{{"x", selftest::random_nested(rng, inner.spec())},
                                  {"y", selftest::random_nested(rng, inner.spec())}};
    System<NestedElement> sys;
    for (int e = 0; e < 3; ++e) {
      const std::vector<NestedElement> consts{selftest::random_nested(rng, inner.spec())};
      const auto w = selftest::random_word(rng, 3, {"x", "y"}, consts);
      // Choose the right-hand side so that sol satisfies w = rhs.
      sys.add(w, NW::constant(evaluate(w, sol, inner)));
    }
    for (const auto& v : std::vector<std::string>{"x", "y"}) sys.declare(v);
    ASSERT_TRUE(check_system(sys, sol, inner).satisfied);

    NameSupply names({"x", "y"});
    std::vector<std::string> ts;
    const auto lifted = lift_system(
        sys, [](const NestedElement& h) { return embed_active(h); }, outer.base_generator(0),
        names, "t", &ts);
    ASSERT_EQ(ts.size(), sys.size());

    Assignment<NestedElement> up;
    for (const auto& [name, value] : sol) {
      auto v = embed_active(value);
      for (int r = 0; r < 2; ++r) {
        const auto pos = selftest::random_nested(rng, inner.spec());
        v = nested_multiply(v, NestedElement::wreath(outer.identity().active(),
                                                     {{pos, {selftest::uniform(rng, -3, 3)}}}));
      }
      up.emplace(name, v);
    }
    for (std::size_t e = 0; e < ts.size(); ++e) {
      const auto w = map_constants<NestedElement>(
          sys.equations()[e].lhs, [](const NestedElement& h) { return embed_active(h); });
      up.emplace(ts[e], evaluate(w, up, outer));
    }
    EXPECT_TRUE(check_system(lifted, up, outer).satisfied);

    Assignment<NestedElement> down;
    for (const auto& [name, value] : up) down.emplace(name, project(value));
    EXPECT_TRUE(check_system(sys, down, inner).satisfied);
    EXPECT_EQ(down.at("x"), sol.at("x"));
  }
}

TEST(CompileIterated, DepthTwoMatchesFlatCompiler) {
  const auto f = parse_int_polynomial("z1*z2 - 6");
  const auto red = compile_iterated(f, IteratedSpec({2, 1}));
  const auto flat = compile(f, GroupSpec(2, 1));
  EXPECT_TRUE(red.lift_vars.empty());
  EXPECT_EQ(red.system.size(), flat.system.size());
  const auto mapped = map_constants<NestedElement>(flat.system,
                                                   [](const WreathElement& g) { return to_nested(g); });
  EXPECT_EQ(red.system, mapped);
  const auto asg = witness_iterated(red, Z{-2, -3});
  EXPECT_TRUE(check_system(red.system, asg, NestedGroup(red.spec)).satisfied);
  EXPECT_EQ(extract_iterated(red, asg), (Z{-2, -3}));
}

TEST(CompileIterated, ThreeLevels) {
  const auto f = parse_int_polynomial("z1 - 2");
  const auto red = compile_iterated(f, K111);
  EXPECT_EQ(red.system.size(), 2 * red.inner.system.size());
  EXPECT_EQ(red.lift_vars.size(), red.inner.system.size());
  EXPECT_EQ(red.lift_vars.front(), "lift3_t_1");
  const NestedGroup grp(K111);
  const auto asg = witness_iterated(red, Z{2});
  EXPECT_TRUE(check_system(red.system, asg, grp).satisfied);
  EXPECT_EQ(extract_iterated(red, asg), Z{2});
  EXPECT_EQ(red.header().front(), "ranks (outermost first): 1 1 1");
}

TEST(CompileIterated, FourLevelsStillVerify) {
  const IteratedSpec spec({1, 1, 1, 1});
  const auto red = compile_iterated(parse_int_polynomial("z1^2 - 4"), spec);
  EXPECT_EQ(red.system.size(), 4 * red.inner.system.size());
  const auto asg = witness_iterated(red, Z{-2});
  EXPECT_TRUE(check_system(red.system, asg, NestedGroup(spec)).satisfied);
  EXPECT_EQ(extract_iterated(red, asg), Z{-2});
}

TEST(CompileIterated, Errors) {
  EXPECT_THROW(compile_iterated(parse_int_polynomial("z1"), IteratedSpec({1})), UsageError);
  const auto red = compile_iterated(parse_int_polynomial("z1 - 2"), K111);
  EXPECT_THROW(witness_iterated(red, Z{3}), PreconditionError);
  EXPECT_THROW(extract_iterated(red, {}), PreconditionError);
}
