// One PASS/FAIL line per acceptance criterion, with wall time.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "hicomm/commutator.hpp"
#include "hicomm/malcev.hpp"
#include "hicomm/terms.hpp"
#include "naive_oracle.hpp"

using namespace hicomm;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: ";
      else note << "; ";
      note << what;
      ok = false;
    }
  }
};

Partition mod_blocks(std::size_t n, std::size_t m) {
  std::vector<std::size_t> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = i % m;
  return Partition::from_labels(l);
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) c.require(false, "time limit " + std::to_string(limit_s) + " s exceeded");
  if (!c.ok) ++failures;
  std::printf("%s criterion %2d: %s (%.2f s)", c.ok ? "PASS" : "FAIL", id, title, dt);
  auto note = c.note.str();
  if (!note.empty()) std::printf(" -- %s", note.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

const Term kGroupMalcev = Term::parse("(p (p x (inv y)) z)");

bool has_pair(const CommutatorResult& r, Elem a, Elem b) {
  for (const auto& c : r.certificates)
    if (c.kind == "witness" && c.pair && c.pair->first == a && c.pair->second == b) return true;
  return false;
}

// Random polynomial over a group signature: p, inv, variables, constants.
Term random_group_term(std::mt19937& rng, std::size_t arity, std::size_t universe, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  int r = pick(rng);
  if (depth == 0 || r < 3) {
    if (r == 0) return Term::constant(static_cast<Elem>(rng() % universe));
    return Term::var(rng() % arity);
  }
  if (r < 5) return Term::apply("inv", {random_group_term(rng, arity, universe, depth - 1)});
  return Term::apply("p", {random_group_term(rng, arity, universe, depth - 1),
                           random_group_term(rng, arity, universe, depth - 1)});
}

}  // namespace

int main() {
  const auto B = builtin_example("z8-bulatov");
  const Partition one8 = Partition::one(8), alpha = mod_blocks(8, 2), beta = mod_blocks(8, 4);
  const Partition zero8 = Partition::zero(8);

  criterion(1, "Z8 congruence lattice is the chain 0 < beta < alpha < 1", 1.0, [&](Check& c) {
    auto L = congruence_lattice(B);
    c.require(L.size() == 4, "lattice has 4 elements");
    if (L.size() != 4) return;
    c.require(L[0].is_zero() && L[1] == beta && L[2] == alpha && L[3].is_one(), "elements 0, beta, alpha, 1");
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<std::size_t> want;
      if (i + 1 < 4) want.push_back(i + 1);
      c.require(L.covers()[i] == want, "covers form a chain");
    }
    c.note << "beta=" << L[1].to_string() << " alpha=" << L[2].to_string();
  });

  criterion(2, "Z8 binary commutators [1,1]=alpha, [1,alpha]=beta, [1,beta]=0", 5.0, [&](Check& c) {
    CommutatorEngine e(B);
    auto a = e.exact({one8, one8}), b = e.exact({one8, alpha}), z = e.exact({one8, beta});
    c.require(a.exact && a.value == alpha, "[1,1] = alpha");
    c.require(b.exact && b.value == beta, "[1,alpha] = beta");
    c.require(z.exact && z.value.is_zero(), "[1,beta] = 0");
    double worst = std::max({a.delta_log2_size, b.delta_log2_size, z.delta_log2_size});
    c.require(worst <= 12.0, "Delta space within 4096");
    // Same values without the module shortcut.
    EngineOptions plain;
    plain.module_path = false;
    plain.group_path = false;
    CommutatorEngine g(B, plain);
    c.require(g.exact({one8, one8}).value == alpha && g.exact({one8, alpha}).value == beta &&
                  g.exact({one8, beta}).value.is_zero(),
              "explicit delta fixpoint agrees");
    c.note << "largest log2|Delta| = " << worst;
  });

  criterion(3, "Z8 ternary bracket closes at alpha", 10.0, [&](Check& c) {
    CommutatorEngine e(B);
    auto r = e.bracket(std::vector<Partition>(3, one8));
    std::vector<Elem> ones{1, 1, 1};
    c.require(B.apply(*B.find_op("f"), ones) == 2, "f(1,1,1) = 2");
    c.require(r.method == CommutatorMethod::witness_lower_bound && r.value == alpha, "witness lower bound alpha");
    c.require(has_pair(r, 0, 2), "witness pair (0,2)");
    c.require(r.upper_method == CommutatorMethod::quotient_upper_bound && r.upper == alpha,
              "quotient upper bound alpha");
    auto Q = quotient_algebra(B, alpha);
    c.require(Q.algebra.size() == 2, "B/alpha has 2 elements");
    CommutatorEngine q(Q.algebra);
    bool vanish = true;
    double worst = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
      auto qr = q.exact(std::vector<Partition>(n, Partition::one(2)));
      vanish = vanish && qr.value.is_zero();
      worst = std::max(worst, qr.delta_log2_size);
    }
    c.require(vanish, "every higher commutator vanishes in B/alpha");
    c.require(worst <= 8.0, "quotient Delta spaces within 2^8");
    c.require(r.exact && r.value == r.upper, "bracket closed");
    c.note << "[1,1,1] = " << r.value.to_string();
  });

  criterion(4, "Z8 fourth commutator bracket closes at beta", 0, [&](Check& c) {
    CommutatorEngine e(B);
    auto r = e.bracket(std::vector<Partition>(4, one8));
    std::vector<Elem> args{1, 1, 2};
    c.require(B.apply(*B.find_op("f"), args) == 4, "f(1,1,2) = 4");
    c.require(e.exact({one8, one8, alpha}).value.related(0, 4), "(0,4) in [1,1,alpha]");
    c.require(r.value == beta && has_pair(r, 0, 4), "witness lower bound beta with pair (0,4)");
    auto Q = quotient_algebra(B, beta);
    auto ab = enumerate_absorbing(Q.algebra, 4, 0);
    bool all_zero = ab.exhaustive;
    for (const auto& m : ab.members) all_zero = all_zero && m.is_constant(0);
    if (!ab.exhaustive) {
      c.note << "indeterminate-upper: clone cap exceeded; lower bound only";
      return;
    }
    c.require(all_zero, "Ab^4_0(B/beta) = {0}");
    c.require(r.upper == beta && r.exact, "bracket closed at beta");
    CloneOptions explicit_tables;
    explicit_tables.allow_module_path = false;
    auto lit = enumerate_absorbing(Q.algebra, 4, 0, explicit_tables);
    c.note << "Ab^4_0(B/beta) has " << ab.members.size() << " member(s) via the module enumeration (2^"
           << ab.log2_count << " absorbing of " << (ab.count_known ? "known" : "unknown")
           << " count); explicit table closure " << (lit.exhaustive ? "converged" : "hit the 10^6 table cap");
  });

  criterion(5, "Z8 supernilpotence class 6", 0, [&](Check& c) {
    CommutatorEngine e(B);
    auto r = e.supernilpotence_class(7);
    c.require(r.lower_bound >= 5, "certified at least 5");
    bool beta_below_five = false;
    for (const auto& ev : r.evidence)
      if (ev.inputs.size() == 5) beta_below_five = leq(beta, ev.value);
    c.require(beta_below_five, "beta <= [1,1,1,1,1]");
    c.require(r.klass && *r.klass == 6, "class = 6");
    c.note << "class " << (r.klass ? std::to_string(*r.klass) : "unknown") << ", lower bound " << r.lower_bound;
  });

  criterion(6, "small corpus: engine = naive oracle = absorbing route", 120.0, [&](Check& c) {
    std::size_t compared = 0, absorbing = 0;
    for (auto name : {"trivial", "z2-group", "z3-group", "z4-group", "z2sq-group", "two-lattice", "two-semilattice",
                      "z4-bulatov"}) {
      auto A = builtin_example(name);
      CommutatorEngine e(A);
      const auto& L = e.lattice();
      bool nilpotent_malcev = find_malcev_term(A).term.has_value() &&
                              e.series(Partition::one(A.size()), "lower-central", 16).terms.back().is_zero();
      std::vector<std::size_t> idx(3);
      for (std::size_t n : {2, 3}) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= L.size();
        for (std::size_t t = 0; t < total; ++t) {
          std::vector<Partition> th;
          for (std::size_t i = 0, x = t; i < n; ++i, x /= L.size()) th.push_back(L[x % L.size()]);
          auto value = e.exact(th).value;
          ++compared;
          if (value != naive::commutator(A, th)) c.require(false, std::string(name) + " disagrees with oracle");
          if (nilpotent_malcev) {
            ++absorbing;
            if (e.absorbing_route(th).value != value)
              c.require(false, std::string(name) + " disagrees with absorbing route");
          }
        }
      }
    }
    c.note << compared << " tuples vs oracle, " << absorbing << " vs absorbing route";
  });

  criterion(7, "ring ideals: [a_I, a_J] = a_(IJ+JI) on Z8", 5.0, [&](Check& c) {
    auto R = builtin_example("z8-ring");
    CommutatorEngine e(R);
    // Ideals of Z8 as element sets; products by additive closure.
    auto closure = [](std::set<int> s) {
      s.insert(0);
      bool grew = true;
      while (grew) {
        grew = false;
        for (int a : std::set<int>(s))
          for (int b : std::set<int>(s))
            if (s.insert((a + b) % 8).second) grew = true;
      }
      return s;
    };
    auto ideal = [&](int d) {
      std::set<int> s;
      for (int x = 0; x < 8; x += d) s.insert(x);
      return s;
    };
    auto congruence_of = [](const std::set<int>& I) {
      std::vector<std::size_t> l(8);
      for (int x = 0; x < 8; ++x)
        for (int y = 0; y <= x; ++y)
          if (I.count(((x - y) % 8 + 8) % 8)) {
            l[x] = y;
            break;
          }
      return Partition::from_labels(l);
    };
    int checked = 0;
    for (int d1 : {1, 2, 4, 8})
      for (int d2 : {1, 2, 4, 8}) {
        auto I = ideal(d1), J = ideal(d2);
        std::set<int> prods;
        for (int i : I)
          for (int j : J) {
            prods.insert(i * j % 8);
            prods.insert(j * i % 8);
          }
        auto K = closure(prods);
        auto got = e.exact({congruence_of(I), congruence_of(J)});
        c.require(got.exact && got.value == congruence_of(K),
                  "ideals " + std::to_string(d1) + "Z, " + std::to_string(d2) + "Z");
        ++checked;
      }
    c.note << checked << " ideal pairs";
  });

  criterion(8, "representation round-trip on Z4 and d4 loop reducts", 60.0, [&](Check& c) {
    std::mt19937 rng(2024);
    std::size_t done = 0;
    for (auto [name, klass, degree] : {std::tuple{"z4-group", 1, 1}, std::tuple{"d4-group", 2, 2}}) {
      auto A = builtin_example(name);
      CommutatorEngine e(A);
      auto sn = e.supernilpotence_class(6);
      c.require(sn.klass && *sn.klass == static_cast<std::size_t>(degree + 1),
                std::string(name) + " supernilpotence class");
      auto L = loop_reduct(A, kGroupMalcev, 0, klass);
      for (int i = 0; i < 100; ++i) {
        std::size_t arity = 1 + rng() % 3;
        auto t = random_group_term(rng, arity, A.size(), 5);
        auto f = term_to_table(A, t, arity);
        // Full-degree interpolation: layers past the implied degree must be 0.
        auto full = interpolation_representation(L, f, arity);
        for (std::size_t m = degree + 1; m <= full.layers.size(); ++m)
          for (const auto& entry : full.layers[m - 1])
            if (!entry.table.is_constant(0)) c.require(false, "nonzero layer above degree for " + t.to_string());
        auto rep = interpolation_representation(L, f, degree);
        if (!verify_representation(L, rep, f).ok) c.require(false, "round trip failed for " + t.to_string());
        ++done;
      }
    }
    c.note << done << " random polynomials";
  });

  criterion(9, "loop reducts of Z4 (class 1) and d4 (class 2); S3 class 1 rejected", 10.0, [&](Check& c) {
    for (auto [name, klass] : {std::pair{"z4-group", 1}, std::pair{"d4-group", 2}}) {
      auto A = builtin_example(name);
      c.require(verify_fg_inverses(A, kGroupMalcev, klass).ok, std::string(name) + " f/g inverse identities");
      auto L = loop_reduct(A, kGroupMalcev, 0, klass);
      c.require(verify_loop(L).ok, std::string(name) + " loop axioms");
    }
    auto S3 = builtin_example("s3-group");
    auto bad = verify_fg_inverses(S3, kGroupMalcev, 1);
    c.require(!bad.ok && !bad.witness.empty(), "S3 class 1 fails with a witness");
    if (!bad.ok) {
      c.note << "S3 fails '" << bad.failed << "' at (";
      for (std::size_t i = 0; i < bad.witness.size(); ++i) c.note << (i ? "," : "") << int(bad.witness[i]);
      c.note << ")";
    }
  });

  criterion(10, "neutrality on the 2-element lattice; SD-meet verdicts", 5.0, [&](Check& c) {
    auto L2 = builtin_example("two-lattice");
    CommutatorEngine e(L2);
    auto one2 = Partition::one(2);
    c.require(e.exact({one2, one2}).value.is_one(), "[1,1] = 1");
    c.require(e.exact({one2, one2, one2}).value.is_one(), "[1,1,1] = 1");
    c.require(e.check_neutrality(2).holds && e.check_neutrality(3).holds, "neutral for n = 2, 3");
    c.require(is_meet_semidistributive(congruence_lattice(B)).holds, "Con(B) is SD-meet");
    auto V = congruence_lattice(builtin_example("z2sq-group"));
    auto sd = is_meet_semidistributive(V);
    c.require(!sd.holds && sd.witness, "Con(Z2^2) is not SD-meet");
    if (sd.witness) {
      auto [x, y, z] = *sd.witness;
      bool atoms = x != y && y != z && x != z;
      for (auto i : {x, y, z}) atoms = atoms && V.covers()[0].end() != std::find(V.covers()[0].begin(), V.covers()[0].end(), i);
      c.require(atoms, "witness is three distinct atoms");
    }
  });

  criterion(11, "term-scheme suite", 60.0, [&](Check& c) {
    auto S3 = builtin_example("s3-group");
    auto D4 = builtin_example("d4-group");
    auto Z4 = builtin_example("z4-group");
    std::vector<Term> d{Term::parse("x"), Term::parse("x")};
    c.require(verify_gumm_terms(S3, d, kGroupMalcev).ok && verify_gumm_terms(D4, d, kGroupMalcev).ok,
              "group Gumm terms");
    CommutatorEngine ed(D4);
    c.require(verify_weak_n_difference(ed, build_qn(kGroupMalcev, 3), 3).ok, "q_3 weak 3-difference on d4");
    for (const auto* A : {&Z4, &D4}) {
      auto seq = pad_to_odd(*A, gumm_sequence({{"d1", d[0]}, {"d2", d[1]}, {"q", kGroupMalcev}}));
      std::vector<Term> dn;
      for (const auto& [name, t] : seq.terms)
        if (name != "q") dn.push_back(t);
      c.require(seq.verified && verify_tv_claims(*A, dn, 3).ok, "t_v claims at m = 3 on " + A->name());
    }
    auto L2 = builtin_example("two-lattice");
    CommutatorEngine el(L2);
    c.require(verify_weak_difference(el, Term::parse("(join (join (meet x y) (meet y z)) (meet x z))")).ok,
              "majority is a weak difference term");
    CommutatorEngine ez(builtin_example("z2-group"));
    c.require(!verify_weak_difference(ez, Term::parse("x")).ok, "first projection on Z2 rejected");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
