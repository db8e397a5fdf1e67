#include "doctest.h"

#include <random>

#include "hicomm/congruence.hpp"
#include "hicomm/subpower.hpp"
#include "hicomm/term.hpp"
#include "naive_oracle.hpp"

using namespace hicomm;

namespace {

Partition blocks_mod(std::size_t n, std::size_t m) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i % m;
  return Partition::from_labels(l);
}

std::vector<std::string> small_corpus() {
  return {"trivial", "z2-group", "z3-group", "z4-group", "z5-group", "z2sq-group",
          "two-lattice", "two-semilattice", "z4-bulatov"};
}

}  // namespace

TEST_CASE("term evaluation") {
  auto Z4 = builtin_example("z4-group");
  std::vector<Elem> a{3};
  CHECK(eval_term(Z4, Term::parse("(p x (inv x))"), a) == 0);
  auto B = builtin_example("z8-bulatov");
  std::vector<Elem> ones{1, 1, 1}, two{1, 1, 2};
  CHECK(eval_term(B, Term::parse("(f x y z)"), ones) == 2);
  CHECK(eval_term(B, Term::parse("(f x y z)"), two) == 4);
  CHECK(term_to_table(Z4, Term::parse("(p x x)"), 1).values == std::vector<Elem>{0, 2, 0, 2});
  CHECK(term_to_table(B, Term::parse("5"), 2).is_constant(5));
  auto L = builtin_example("two-lattice");
  CHECK(term_to_table(L, Term::parse("x0"), 2).values == std::vector<Elem>{0, 0, 1, 1});

  CHECK_THROWS_AS(eval_term(Z4, Term::parse("(q x y)"), a), AlgebraError);
  CHECK_THROWS_AS(eval_term(Z4, Term::parse("(p x)"), a), AlgebraError);
  CHECK_THROWS_AS(eval_term(Z4, Term::parse("(p x x3)"), a), AlgebraError);
  CHECK_THROWS(Term::parse("(p x"));

  // Table agrees with pointwise evaluation.
  auto t = Term::parse("(+ (f x y (+ z 3)) (f z z x))");
  auto tab = term_to_table(B, t, 3);
  std::vector<Elem> args(3, 0);
  do CHECK(tab(args) == eval_term(B, t, args));
  while (next_tuple(args, 8));
}

TEST_CASE("algebra files") {
  const char* text = R"(# B
algebra B
size 8
op + 2
)";
  std::string s = text;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) s += std::to_string((x + y) % 8) + (y == 7 ? "\n" : " ");
  s += "op f 3\n";
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      for (int z = 0; z < 8; ++z) s += std::to_string(2 * x * y * z % 8) + " ";
  auto A = parse_algebra(s);
  auto B = builtin_example("z8-bulatov");
  CHECK(A.size() == 8);
  CHECK(A.op("+").table == B.op("+").table);
  CHECK(A.op("f").table == B.op("f").table);
  CHECK(A.content_hash() == B.content_hash());

  for (const auto& name : builtin_names()) {
    if (name == "zN-group") continue;
    auto C = builtin_example(name);
    auto D = parse_algebra(serialize_algebra(C));
    REQUIRE(D.ops().size() == C.ops().size());
    for (std::size_t i = 0; i < C.ops().size(); ++i) CHECK(D.op(i).table == C.op(i).table);
  }

  try {
    parse_algebra("algebra e\nsize 2\nop g 1\n");
    FAIL("expected an error");
  } catch (const AlgebraError& e) {
    CHECK(std::string(e.what()).find("table length 0 ≠ 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_algebra("algebra e\nsize 2\nop g 1\n0 2\n"), AlgebraError);
  CHECK_THROWS_AS(parse_algebra("algebra e\nsize 2\nop g 1\n0 1\nop g 1\n1 0\n"), AlgebraError);
  CHECK_THROWS_AS(parse_algebra("algebra e\nsize x\n"), ParseError);
  CHECK_THROWS(builtin_example("no-such-algebra"));

  auto R = builtin_example("z8-ring");
  CHECK(R.size() == 8);
  std::vector<Elem> xy{3, 5};
  CHECK(R.apply(*R.find_op("*"), xy) == 7);
  CHECK(R.apply(*R.find_op("+"), xy) == 0);
  auto L = builtin_example("two-lattice");
  CHECK(L.find_op("meet"));
  CHECK(L.find_op("join"));
}

TEST_CASE("quasigroup check") {
  // Z3 with x*y = x+y, x\y = y-x, x/y = x-y.
  std::vector<Elem> mul, ld, rd;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      mul.push_back((x + y) % 3);
      ld.push_back((y - x + 3) % 3);
      rd.push_back((x - y + 3) % 3);
    }
  FiniteAlgebra Q("z3q", 3, {{"*", 2, mul}, {"\\", 2, ld}, {"/", 2, rd}});
  auto ops = find_quasigroup_ops(Q);
  REQUIRE(ops);
  CHECK(is_quasigroup(Q, *ops));
  FiniteAlgebra bad("z3q", 3, {{"*", 2, mul}, {"\\", 2, rd}, {"/", 2, ld}});
  CHECK_FALSE(is_quasigroup(bad, {0, 1, 2}));
}

TEST_CASE("congruence generation") {
  auto B = builtin_example("z8-bulatov");
  CHECK(principal_congruence(B, 3, 3).is_zero());
  CHECK(principal_congruence(B, 0, 4) == blocks_mod(8, 4));
  CHECK(principal_congruence(B, 0, 1).is_one());
  CHECK(congruence_closure(B, std::vector<ElemPair>{}).is_zero());
  std::vector<ElemPair> two{{0, 4}, {0, 2}};
  CHECK(congruence_closure(B, two) == blocks_mod(8, 2));
  auto L = builtin_example("two-lattice");
  CHECK(principal_congruence(L, 0, 1).is_one());
  auto beta = principal_congruence(B, 0, 4);
  CHECK(join(B, beta, beta) == beta);
  CHECK(join(B, beta, principal_congruence(B, 0, 2)) == blocks_mod(8, 2));
  CHECK(meet(beta, Partition::one(8)) == beta);

  // Monotone and idempotent on random seed sets.
  std::mt19937 rng(7);
  auto D = builtin_example("d4-group");
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ElemPair> S;
    for (int i = 0; i < 2; ++i) S.emplace_back(rng() % 8, rng() % 8);
    auto T = S;
    T.emplace_back(rng() % 8, rng() % 8);
    auto cs = congruence_closure(D, S);
    CHECK(leq(cs, congruence_closure(D, T)));
    auto again = cs.generating_pairs();
    CHECK(congruence_closure(D, again) == cs);
    CHECK(is_congruence(D, cs));
  }
}

TEST_CASE("congruence lattices") {
  auto B = builtin_example("z8-bulatov");
  auto L = congruence_lattice(B);
  REQUIRE(L.size() == 4);
  CHECK(L[0].is_zero());
  CHECK(L[1] == blocks_mod(8, 4));
  CHECK(L[2] == blocks_mod(8, 2));
  CHECK(L[3].is_one());
  for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(L.covers()[i] == std::vector<std::size_t>{i + 1});
  CHECK(is_meet_semidistributive(L).holds);

  auto V = congruence_lattice(builtin_example("z2sq-group"));
  CHECK(V.size() == 5);
  auto sd = is_meet_semidistributive(V);
  CHECK_FALSE(sd.holds);
  REQUIRE(sd.witness);
  auto [x, y, z] = *sd.witness;
  CHECK(x != y);
  CHECK(y != z);
  CHECK(x != z);
  for (auto i : {x, y, z}) CHECK(V[i].block_count() == 2);

  CHECK(congruence_lattice(builtin_example("trivial")).size() == 1);
  CHECK(is_meet_semidistributive(congruence_lattice(builtin_example("two-lattice"))).holds);
  CHECK_THROWS_AS(congruence_lattice(builtin_example("z2sq-group"), 3), LatticeCapExceeded);

  // Agrees with brute force over all partitions.
  for (const auto& name : small_corpus()) {
    auto A = builtin_example(name);
    auto C = congruence_lattice(A, 100000, 2);
    auto brute = naive::congruences(A);
    CHECK_MESSAGE(C.size() == brute.size(), name);
    for (const auto& lab : brute) CHECK(C.index_of(Partition::from_labels(lab)));
    for (std::size_t i = 0; i < C.size(); ++i)
      for (std::size_t j = 0; j < C.size(); ++j) {
        CHECK(C.leq(i, j) == leq(C[i], C[j]));
        CHECK(C[C.meet_index(i, j)] == meet(C[i], C[j]));
      }
  }
  auto dot = lattice_to_dot(L);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("{0,4|1,5|2,6|3,7}") != std::string::npos);
}

TEST_CASE("quotients and congruence specs") {
  auto B = builtin_example("z8-bulatov");
  auto q0 = quotient_algebra(B, Partition::zero(8));
  CHECK(q0.algebra.op("f").table == B.op("f").table);
  CHECK(quotient_algebra(B, Partition::one(8)).algebra.size() == 1);
  auto q = quotient_algebra(B, blocks_mod(8, 4));
  auto Z4 = builtin_example("z4-bulatov");
  REQUIRE(q.algebra.size() == 4);
  for (Elem i = 0; i < 8; ++i) CHECK(q.map[i] == i % 4);
  CHECK(q.algebra.op("+").table == Z4.op("+").table);
  CHECK(q.algebra.op("f").table == Z4.op("f").table);
  CHECK_THROWS(quotient_algebra(B, Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3})));
  CHECK(quotient_partition(q, blocks_mod(8, 2)) == blocks_mod(4, 2));

  auto L = congruence_lattice(B);
  CHECK(parse_congruence_spec(B, "zero").is_zero());
  CHECK(parse_congruence_spec(B, "one").is_one());
  CHECK(parse_congruence_spec(B, "cg:0-4") == blocks_mod(8, 4));
  CHECK(parse_congruence_spec(B, "cg:0-4,0-2") == blocks_mod(8, 2));
  CHECK(parse_congruence_spec(B, "idx:2", &L) == blocks_mod(8, 2));
  CHECK_THROWS(parse_congruence_spec(B, "idx:9", &L));
  CHECK_THROWS(parse_congruence_spec(B, "cg:0-9"));
}

TEST_CASE("subpower closure agrees with the naive cube closure") {
  for (const auto& name : small_corpus()) {
    auto A = builtin_example(name);
    auto brute = naive::congruences(A);
    for (const auto& l1 : brute)
      for (const auto& l2 : brute) {
        std::vector<Partition> th{Partition::from_labels(l1), Partition::from_labels(l2)};
        auto ref = naive::cubes(A, th);
        // Engine coordinates put the first argument in the high bit; the
        // oracle uses the low bit, so swap before comparing.
        std::vector<std::vector<Elem>> gens;
        for (std::size_t i = 0; i < 2; ++i)
          for (Elem a = 0; a < A.size(); ++a)
            for (Elem b = 0; b < A.size(); ++b)
              if (th[i].related(a, b)) {
                std::vector<Elem> c(4);
                for (std::size_t v = 0; v < 4; ++v) c[v] = (v >> (1 - i)) & 1 ? b : a;
                gens.push_back(c);
              }
        for (bool group : {false, true}) {
          ClosureOptions co;
          co.allow_group_path = group;
          auto S = generate_subpower(A, 4, gens, co);
          REQUIRE(S.complete());
          CHECK_MESSAGE(S.size() == ref.size(), name);
          for (const auto& c : ref) {
            std::vector<Elem> swapped{c[0], c[2], c[1], c[3]};
            CHECK(S.contains(swapped));
          }
        }
      }
  }
}

TEST_CASE("subpower caps") {
  auto B = builtin_example("z8-bulatov");
  std::vector<std::vector<Elem>> gens{{0, 1, 2}, {1, 1, 0}};
  ClosureOptions co;
  co.cap = 10;
  auto S = generate_subpower(B, 3, gens, co);
  CHECK_FALSE(S.complete());
  CHECK(S.cap_exceeded());
  co.cap = 1 << 20;
  auto full = generate_subpower(B, 3, gens, co);
  CHECK(full.complete());
  co.stop_when = [](std::span<const Elem> t) { return t[0] == 5 && t[1] == 5; };
  auto stopped = generate_subpower(B, 3, gens, co);
  CHECK(stopped.stopped());
}
