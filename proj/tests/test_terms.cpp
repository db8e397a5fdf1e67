#include "doctest.h"

#include "hicomm/terms.hpp"

using namespace hicomm;

namespace {

const Term kGroupQ = Term::parse("(p (p x (inv y)) z)");

Partition parity(std::size_t n) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i % 2;
  return Partition::from_labels(l);
}

}  // namespace

TEST_CASE("difference terms") {
  auto L = builtin_example("two-lattice");
  CommutatorEngine el(L);
  auto maj = Term::parse("(join (join (meet x y) (meet y z)) (meet x z))");
  CHECK(verify_weak_difference(el, maj).ok);

  auto Z2 = builtin_example("z2-group");
  CommutatorEngine ez(Z2);
  auto proj = verify_weak_difference(ez, Term::parse("x"));
  CHECK_FALSE(proj.ok);
  CHECK(verify_weak_difference(ez, kGroupQ).ok);

  auto B = builtin_example("z8-bulatov");
  CommutatorEngine eb(B);
  CHECK_FALSE(verify_weak_n_difference(eb, Term::parse("z"), 2).ok);
  auto mb = Term::parse("(+ (+ x (+ y (+ y (+ y (+ y (+ y (+ y y))))))) z)");
  CHECK(verify_n_difference(eb, mb, 4).ok);

  auto D = builtin_example("d4-group");
  CommutatorEngine ed(D);
  CHECK(verify_weak_n_difference(ed, build_qn(kGroupQ, 3), 3).ok);
}

TEST_CASE("gumm and jonsson") {
  auto G = builtin_example("s3-group");
  std::vector<Term> d{Term::parse("x"), Term::parse("x")};
  CHECK(verify_gumm_terms(G, d, kGroupQ).ok);
  auto bad = verify_gumm_terms(G, d, Term::parse("x"));
  CHECK_FALSE(bad.ok);
  CHECK(bad.failed == "q(x,x,z) = z");

  auto L = builtin_example("two-lattice");
  std::vector<Term> j{Term::parse("x"), Term::parse("(meet x (join y z))"), Term::parse("z")};
  // d2(x,z,z) = x & z differs from d1(x,z,z) = x, so the scan rejects it.
  CHECK_FALSE(verify_jonsson_terms(L, j).ok);
  std::vector<Term> j2{Term::parse("x"), Term::parse("x"), Term::parse("(join (join (meet x y) (meet y z)) (meet x z))"),
                       Term::parse("z")};
  CHECK(verify_jonsson_terms(L, j2).ok);
}

TEST_CASE("q chain") {
  for (auto name : {"z4-group", "d4-group", "s3-group"}) {
    auto A = builtin_example(name);
    auto q = term_to_table(A, kGroupQ, 3);
    CHECK(term_to_table(A, build_qn(kGroupQ, 2), 3) == q);
    CHECK(term_to_table(A, build_qn(kGroupQ, 3), 3) == q);
    for (std::size_t m = 2; m <= 6; ++m) {
      auto t = term_to_table(A, build_qn(kGroupQ, m), 3);
      for (Elem x = 0; x < A.size(); ++x)
        for (Elem z = 0; z < A.size(); ++z) CHECK(t({x, x, z}) == z);
    }
  }
}

TEST_CASE("t_v family") {
  CHECK(tv_length(3) == 3);
  CHECK(tv_length(4) == 7);
  CHECK(tv_level(15) == 5);
  CHECK(tv_level(5) == 0);
  for (auto name : {"z4-group", "d4-group"}) {
    auto A = builtin_example(name);
    auto seq = pad_to_odd(A, gumm_sequence({{"d1", Term::parse("x")}, {"d2", Term::parse("x")}, {"q", kGroupQ}}));
    CHECK(seq.n == 3);
    CHECK(seq.verified);
    std::vector<Term> d{seq.terms[0].second, seq.terms[1].second, seq.terms[2].second};
    CHECK(verify_tv_claims(A, d, 3).ok);
    for (Elem a = 0; a < A.size(); ++a)
      for (Elem b = 0; b < A.size(); ++b) {
        auto t = build_tv(A, d, {3, 3, 3}, a, b);
        CHECK(t.is_constant(a));
      }
  }
  // A sequence whose last term is not a projection: t_(n..n)(b..b) = q_m(a,b,b).
  auto Z = builtin_example("z4-group");
  std::vector<Term> d{Term::parse("x"), Term::parse("x"), kGroupQ};
  auto q3 = term_to_table(Z, build_qn(kGroupQ, 3), 3);
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b) {
      auto t = build_tv(Z, d, {3, 3, 3}, a, b);
      CHECK(t({b, b, b}) == q3({a, b, b}));
    }
  CHECK_THROWS(build_tv(Z, d, {1, 2, 3, 1}, 0, 1));
}

TEST_CASE("difference operator and theta absorption") {
  auto Z = builtin_example("z4-group");
  FunctionTable f(4, 1, {1, 2, 3, 0});
  auto D1 = difference_operator(Z, kGroupQ, 0, {{0}}, f);
  for (Elem x = 0; x < 4; ++x) CHECK(D1({x}) == x);
  CHECK(difference_operator(Z, kGroupQ, 2, {{0}}, FunctionTable::constant(4, 1, 3)).is_constant(2));

  // Two blocks: nested form m(m(f(x1,x2), f(a1,x2), o), m(f(x1,a2), f(a1,a2), o), o).
  auto B = builtin_example("z8-bulatov");
  FunctionTable g(8, 2, term_to_table(B, Term::parse("(f x y (+ x y))"), 2).values);
  auto mq = term_to_table(B, Term::parse("(+ (+ x (+ y (+ y (+ y (+ y (+ y (+ y y))))))) z)"), 3);
  auto D2 = difference_operator(B, Term::parse("(+ (+ x (+ y (+ y (+ y (+ y (+ y (+ y y))))))) z)"), 0, {{3}, {5}}, g);
  for (Elem x1 = 0; x1 < 8; ++x1)
    for (Elem x2 = 0; x2 < 8; ++x2) {
      Elem inner1 = mq({g({x1, x2}), g({3, x2}), 0});
      Elem inner2 = mq({g({x1, 5}), g({3, 5}), 0});
      CHECK(D2({x1, x2}) == mq({inner1, inner2, 0}));
    }

  auto f3 = FunctionTable(8, 3, B.op("f").table);
  std::vector<std::vector<std::size_t>> unary{{0}, {1}, {2}};
  std::vector<Elem> zero3{0, 0, 0};
  CHECK(theta_absorbs(f3, unary, zero3, 0, Partition::one(8)));
  CHECK(theta_absorbs(f3, unary, zero3, 0, Partition::zero(8)) == is_absorbing(f3, zero3, 0));
  std::vector<std::size_t> mod4{0, 1, 2, 3, 0, 1, 2, 3};
  auto Q = quotient_algebra(B, Partition::from_labels(mod4));
  FunctionTable fq(4, 3, Q.algebra.op("f").table);
  CHECK(theta_absorbs(fq, unary, zero3, 0, principal_congruence(Q.algebra, 0, 2)));
}

TEST_CASE("weak f-terms") {
  auto L = builtin_example("two-lattice");
  CommutatorEngine el(L);
  auto one = parse_congruence_map(el, "const:one");
  auto id = parse_congruence_map(el, "identity");
  auto meet3 = Term::parse("(meet x (meet y z))");
  CHECK(verify_weak_f_term(el, meet3, one).ok);
  CHECK(verify_weak_f_term(el, meet3, id).ok);
  auto D = builtin_example("d4-group");
  CommutatorEngine ed(D);
  auto zero = parse_congruence_map(ed, "const:zero");
  CHECK(verify_weak_f_term(ed, kGroupQ, zero).ok);
  auto lcs = parse_congruence_map(ed, "lcs:1");
  CHECK(is_order_preserving(ed.lattice(), lcs));
  CHECK(lcs(ed.lattice(), Partition::one(8)).block_count() == 4);
  CHECK_THROWS(parse_congruence_map(ed, "bogus"));
}

TEST_CASE("T sets") {
  auto Z = builtin_example("z4-group");
  CommutatorEngine ez(Z);
  auto zero = parse_congruence_map(ez, "const:zero");
  auto one4 = Partition::one(4);
  auto tz = generate_T(ez, one4, zero, {one4, one4});
  CHECK(tz.complete);
  CHECK(tz.generated.is_zero());
  auto only_refl = generate_T(ez, one4, zero, {Partition::zero(4), one4});
  CHECK(only_refl.pairs.empty());

  auto B = builtin_example("z8-bulatov");
  CommutatorEngine eb(B);
  auto zb = parse_congruence_map(eb, "const:zero");
  auto one8 = Partition::one(8);
  auto tb = generate_T(eb, one8, zb, {one8, one8});
  CHECK(tb.complete);
  CHECK(tb.generated == parity(8));
}

TEST_CASE("T sets generate the commutator on Mal'cev algebras") {
  for (auto name : {"z4-group", "z2sq-group", "d4-group", "s3-group", "z4-bulatov", "z8-bulatov", "z8-ring"}) {
    auto A = builtin_example(name);
    CommutatorEngine e(A);
    auto zero = parse_congruence_map(e, "const:zero");
    const auto& L = e.lattice();
    auto one = Partition::one(A.size());
    for (std::size_t i = 0; i < L.size(); ++i)
      for (std::size_t j = 0; j < L.size(); ++j) {
        auto t = generate_T(e, one, zero, {L[i], L[j]});
        REQUIRE(t.complete);
        CHECK_MESSAGE(t.generated == e.exact({L[i], L[j]}).value, name << " " << i << " " << j);
      }
    if (A.size() <= 4)
      for (std::size_t i = 0; i < L.size(); ++i) {
        auto t = generate_T(e, one, zero, {L[i], L[i], one});
        REQUIRE(t.complete);
        CHECK_MESSAGE(t.generated == e.exact({L[i], L[i], one}).value, name << " " << i);
      }
  }
}
