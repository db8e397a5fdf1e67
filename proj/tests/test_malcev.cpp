#include "doctest.h"

#include <random>

#include "hicomm/malcev.hpp"

using namespace hicomm;

namespace {

Term group_malcev() { return Term::parse("(p (p x (inv y)) z)"); }

// Ternary ops on {0,1} that preserve the order 0 < 1.
bool monotone(const std::vector<Elem>& t) {
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = 0; b < 8; ++b)
      if ((a & b) == a && t[a] > t[b]) return false;
  return true;
}

}  // namespace

TEST_CASE("malcev search") {
  auto G = builtin_example("d4-group");
  auto r = find_malcev_term(G);
  REQUIRE(r.term);
  CHECK_FALSE(malcev_violation(G, *r.term));

  auto L = builtin_example("two-lattice");
  auto s = find_malcev_term(L);
  CHECK_FALSE(s.term);
  CHECK(s.exhausted);
  // Independent check: no monotone ternary op on 2 elements is Mal'cev.
  for (std::size_t code = 0; code < 256; ++code) {
    std::vector<Elem> t(8);
    for (std::size_t i = 0; i < 8; ++i) t[i] = (code >> i) & 1;
    if (!monotone(t)) continue;
    bool malcev = t[0b011] == 0 && t[0b110] == 0 && t[0b100] == 1 && t[0b001] == 1;
    CHECK_FALSE(malcev);
  }
}

TEST_CASE("quasigroup fast path") {
  // Z3 with x*y = x+y, x\y = y-x, x/y = x-y as explicit quasigroup ops.
  std::vector<Elem> mul(9), ld(9), rd(9);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      mul[x * 3 + y] = static_cast<Elem>((x + y) % 3);
      ld[x * 3 + y] = static_cast<Elem>((y - x + 3) % 3);
      rd[x * 3 + y] = static_cast<Elem>((x - y + 3) % 3);
    }
  FiniteAlgebra Q("z3q", 3, {{"*", 2, mul}, {"\\", 2, ld}, {"/", 2, rd}});
  auto r = find_malcev_term(Q);
  REQUIRE(r.term);
  CHECK(r.method == "quasigroup");
  CHECK(r.term->to_string() == "(* (/ x0 (\\ x1 x1)) (\\ x1 x2))");
  CHECK_FALSE(malcev_violation(Q, *r.term));
}

TEST_CASE("f and g terms") {
  auto Z = builtin_example("z4-group");
  auto m = group_malcev();
  auto fg0 = build_fg_terms(m, 0);
  CHECK(fg0.f.to_string() == "x0");
  CHECK(fg0.g.to_string() == "x2");
  auto f1 = term_to_table(Z, build_fg_terms(m, 1).f, 3);
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y)
      for (Elem z = 0; z < 4; ++z) CHECK(f1({x, y, z}) == (x + y + 4 - z) % 4);
  CHECK(verify_fg_inverses(Z, m, 1).ok);
  CHECK(verify_fg_inverses(builtin_example("d4-group"), m, 2).ok);
  auto bad = verify_fg_inverses(builtin_example("s3-group"), m, 1);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("loop reducts") {
  auto Z = builtin_example("z4-group");
  auto L = loop_reduct(Z, group_malcev(), 0, 1);
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) CHECK(L.mul(x, y) == (x + y) % 4);
  auto L1 = loop_reduct(Z, group_malcev(), 1, 1);
  CHECK(verify_loop(L1).ok);
  CHECK(L1.mul(1, 3) == 3);
  auto D = builtin_example("d4-group");
  CHECK(verify_loop(loop_reduct(D, group_malcev(), 0, 2)).ok);
  auto S = builtin_example("s3-group");
  CHECK_THROWS_AS(loop_reduct(S, group_malcev(), 0, 1), AlgebraError);
}

TEST_CASE("representations") {
  auto Z = builtin_example("z4-group");
  auto L = loop_reduct(Z, group_malcev(), 0, 1);
  std::vector<Elem> v(16);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) v[x * 4 + y] = static_cast<Elem>((1 + x + 3 * y) % 4);
  FunctionTable f(4, 2, v);
  auto rep = interpolation_representation(L, f, 1);
  CHECK(rep.c == 1);
  REQUIRE(rep.layers.size() == 1);
  for (Elem x = 0; x < 4; ++x) {
    CHECK(rep.layers[0][0].table({x}) == x);
    CHECK(rep.layers[0][1].table({x}) == (3 * x) % 4);
  }
  CHECK(verify_representation(L, rep, f).ok);
  auto back = representation_from_json(representation_to_json(rep), 4);
  CHECK(verify_representation(L, back, f).ok);
  rep.layers[0][0].table.values[1] ^= 1;
  CHECK_FALSE(verify_representation(L, rep, f).ok);
}

TEST_CASE("z8 product layer") {
  auto B = builtin_example("z8-bulatov");
  auto m = Term::parse("(+ (+ x (+ y (+ y (+ y (+ y (+ y (+ y y))))))) z)");
  auto L = loop_reduct(B, m, 0, 1);
  auto f = FunctionTable(8, 3, B.op("f").table);
  auto rep = interpolation_representation(L, f, 5);
  CHECK(rep.c == 0);
  for (std::size_t layer = 0; layer < 2; ++layer)
    for (const auto& e : rep.layers[layer]) CHECK(e.table.is_constant(0));
  CHECK(rep.layers[2][0].table == f);
  CHECK_THROWS_AS(interpolation_representation(L, f, 2), ResidualError);
}

TEST_CASE("n-type loops") {
  auto Z = builtin_example("z4-group");
  auto L = loop_reduct(Z, group_malcev(), 0, 1);
  CHECK(verify_ntype(L, 2).passes());
  auto D = builtin_example("d4-group");
  auto LD = loop_reduct(D, group_malcev(), 0, 2);
  auto r = verify_ntype(LD, 3);
  CHECK(r.generation.status == "pass");
  CHECK(r.distributivity.status == "pass");
  CHECK(r.nested.status == "pass");

  auto Z2 = builtin_example("z2-group");
  auto L2 = loop_reduct(Z2, group_malcev(), 0, 1);
  L2.extras["join"] = FunctionTable(2, 2, {0, 1, 1, 1});
  auto bad = verify_ntype(L2, 2);
  CHECK(bad.distributivity.status == "fail");
}

TEST_CASE("measure terms") {
  auto Z = builtin_example("z4-group");
  auto L = loop_reduct(Z, group_malcev(), 0, 1);
  auto mt = loop_measure_terms(L);
  CHECK(mt.commutator.is_constant(0));
  CHECK(mt.assoc_left.is_constant(0));
  CHECK(mt.assoc_right.is_constant(0));
  CHECK(mt.equations.ok);

  auto D = builtin_example("d4-group");
  auto LD = loop_reduct(D, group_malcev(), 0, 2);
  FunctionTable t(8, 1, {0, 1, 2, 3, 4, 5, 6, 7});
  auto md = loop_measure_terms(LD, &t);
  CHECK_FALSE(md.commutator.is_constant(0));
  CHECK(md.equations.ok);
  CHECK(md.absorption.ok);
  CHECK(md.distributor->is_constant(0));
  // group commutator oracle: x y x^-1 y^-1 equals (xy)/(yx) = xy (yx)^-1
  auto P = D.op("p").table;
  auto I = D.op("inv").table;
  for (Elem x = 0; x < 8; ++x)
    for (Elem y = 0; y < 8; ++y) {
      Elem xyxiyi = P[P[P[x * 8 + y] * 8 + I[x]] * 8 + I[y]];
      CHECK(md.commutator({x, y}) == xyxiyi);
    }
}
