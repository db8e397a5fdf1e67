#include "hicomm/commutator.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace hicomm {

std::string to_string(CommutatorMethod m) {
  switch (m) {
    case CommutatorMethod::delta_exact:
      return "delta-exact";
    case CommutatorMethod::witness_lower_bound:
      return "witness-lower-bound";
    case CommutatorMethod::quotient_upper_bound:
      return "quotient-upper-bound";
    case CommutatorMethod::absorbing_generators:
      return "absorbing-generators";
  }
  return "?";
}

std::vector<std::vector<Elem>> cube_generators(const FiniteAlgebra& A, std::span<const Partition> thetas) {
  const std::size_t n = thetas.size();
  const std::size_t width = std::size_t{1} << n;
  std::set<std::vector<Elem>> seen;
  std::vector<std::vector<Elem>> out;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& th = thetas[i - 1];
    if (th.size() != A.size()) throw AlgebraError("partition size mismatch");
    for (std::size_t a = 0; a < A.size(); ++a)
      for (std::size_t b = 0; b < A.size(); ++b) {
        if (!th.related(a, b)) continue;
        std::vector<Elem> cube(width);
        for (std::size_t v = 0; v < width; ++v) cube[v] = static_cast<Elem>(vertex_bit(v, n, i) ? b : a);
        if (seen.insert(cube).second) out.push_back(std::move(cube));
      }
  }
  return out;
}

double CubeSet::log2_size() const {
  if (module_) return module_->module.log2_size();
  return std::log2(static_cast<double>(explicit_->size()));
}

bool CubeSet::contains(std::span<const Elem> cube) const {
  if (explicit_) return explicit_->contains(cube);
  std::vector<std::uint32_t> ints(cube.size());
  for (std::size_t j = 0; j < cube.size(); ++j) ints[j] = plan_->to_int[cube[j]];
  return module_->module.contains(ints);
}

std::string CubeSet::path() const {
  if (module_) return "module";
  return explicit_->used_group_path() ? "group" : "generic";
}

CubeSet generate_delta(const FiniteAlgebra& A, std::size_t dimension, const std::vector<std::vector<Elem>>& generators,
                       const EngineOptions& options) {
  CubeSet cs;
  cs.dimension_ = dimension;
  cs.cap_ = options.delta_cap;
  const std::size_t width = std::size_t{1} << dimension;
  if (options.module_path) cs.plan_ = detect_module_plan(A);
  if (cs.plan_) {
    cs.module_ = generate_submodule(A, *cs.plan_, width, generators, options.delta_cap, options.max_work);
    cs.complete_ = cs.module_->complete;
  } else {
    ClosureOptions co;
    co.cap = options.delta_cap;
    co.allow_group_path = options.group_path;
    co.max_work = options.max_work;
    cs.explicit_ = generate_subpower(A, width, generators, co);
    cs.complete_ = cs.explicit_->complete();
  }
  return cs;
}

Partition delta_fixpoint(const FiniteAlgebra& A, const Subpower& cubes, std::size_t dimension) {
  const std::size_t width = std::size_t{1} << dimension;
  const std::size_t top0 = width - 2, top1 = width - 1;
  Partition delta = Partition::zero(A.size());
  while (true) {
    DisjointSet ds(A.size());
    for (auto [a, b] : delta.generating_pairs()) ds.unite(a, b);
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      auto u = cubes[i];
      bool premise = true;
      for (std::size_t v = 0; v < top0 && premise; v += 2) premise = ds.find(u[v]) == ds.find(u[v + 1]);
      if (premise) ds.unite(u[top0], u[top1]);
    }
    Partition seeded = Partition::from_disjoint_set(ds);
    auto pairs = seeded.generating_pairs();
    Partition next = congruence_closure(A, pairs);
    if (next == delta) return delta;
    delta = std::move(next);
  }
}

bool HcReport::all_pass() const {
  for (const auto& e : entries)
    if (e.status == "fail") return false;
  return true;
}

CommutatorEngine::CommutatorEngine(const FiniteAlgebra& A, EngineOptions options) : A_(A), opt_(options) {
  if (opt_.module_path) plan_ = detect_module_plan(A_);
}

const CongruenceLattice& CommutatorEngine::lattice() {
  if (!lattice_) lattice_ = std::make_unique<CongruenceLattice>(congruence_lattice(A_, opt_.lattice_cap, opt_.threads));
  return *lattice_;
}

namespace {

Partition meet_all(std::size_t n, std::span<const Partition> thetas) {
  Partition m = Partition::one(n);
  for (const auto& t : thetas) m = meet(m, t);
  return m;
}

std::string cap_note(const std::string& name, std::size_t value) { return name + "=" + std::to_string(value); }

}  // namespace

CommutatorResult CommutatorEngine::compute_exact(const std::vector<Partition>& thetas) {
  const std::size_t n = thetas.size();
  CommutatorResult r;
  r.inputs = thetas;
  r.method = r.upper_method = CommutatorMethod::delta_exact;
  if (n == 0) throw AlgebraError("commutator needs at least one argument");
  for (const auto& t : thetas)
    if (auto w = compatibility_violation(A_, t)) throw AlgebraError("argument " + t.to_string() + " is not a congruence");
  if (n == 1) {
    r.value = r.upper = thetas[0];
    r.path = "unary";
    return r;
  }
  if (std::any_of(thetas.begin(), thetas.end(), [](const Partition& p) { return p.is_zero(); })) {
    r.value = r.upper = Partition::zero(A_.size());
    r.path = "zero-argument";
    return r;
  }
  auto gens = cube_generators(A_, thetas);
  CubeSet cs = generate_delta(A_, n, gens, opt_);
  r.path = cs.path();
  r.caps.push_back(cap_note("delta-cap", opt_.delta_cap));
  if (!cs.complete())
    throw IndeterminateError("cube closure exceeded its cap", cap_note("delta-cap", opt_.delta_cap));
  r.delta_log2_size = cs.log2_size();
  const std::size_t width = std::size_t{1} << n;
  if (cs.is_module()) {
    // Mal'cev case: the commutator is generated by the pivot cubes, whose
    // vertices other than the top are all zero.
    const auto& M = cs.module()->module;
    const auto& plan = *cs.plan();
    std::optional<std::uint32_t> d;
    for (std::size_t row = 0; row < M.rows().size(); ++row)
      if (M.pivot_column(row) == width - 1) d = M.rows()[row][width - 1];
    if (!d) {
      r.value = Partition::zero(A_.size());
    } else {
      r.value = principal_congruence(A_, plan.from_int[0], plan.from_int[*d]);
      Certificate c;
      c.kind = "pivot-cube";
      c.cube.assign(width, plan.from_int[0]);
      c.cube[width - 1] = plan.from_int[*d];
      c.pair = ElemPair{plan.from_int[0], plan.from_int[*d]};
      r.certificates.push_back(std::move(c));
    }
  } else {
    r.value = delta_fixpoint(A_, *cs.explicit_set(), n);
  }
  r.upper = r.value;
  return r;
}

CommutatorResult CommutatorEngine::exact(std::span<const Partition> thetas) {
  std::vector<Partition> key(thetas.begin(), thetas.end());
  if (auto it = cache_.find(key); it != cache_.end() && it->second.exact &&
                                  it->second.method == CommutatorMethod::delta_exact)
    return it->second;
  CommutatorResult r = compute_exact(key);
  cache_[key] = r;
  return r;
}

CommutatorResult CommutatorEngine::commutator(std::span<const Partition> thetas) {
  std::vector<Partition> key(thetas.begin(), thetas.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  try {
    return exact(thetas);
  } catch (const IndeterminateError& e) {
    CommutatorResult r = bracket(thetas);
    r.caps.push_back(e.cap());
    cache_[key] = r;
    return r;
  }
}

const AbsorbingSet& CommutatorEngine::absorbing(std::size_t k, Elem zero) {
  auto key = std::make_pair(k, zero);
  if (auto it = absorbing_cache_.find(key); it != absorbing_cache_.end()) return it->second;
  CloneOptions co;
  co.cap = opt_.clone_cap;
  co.allow_module_path = opt_.module_path;
  co.max_work = opt_.max_work;
  return absorbing_cache_.emplace(key, enumerate_absorbing(A_, k, zero, co)).first->second;
}

namespace {

// Every block sequence obtained by permuting the argument blocks.
std::vector<std::vector<std::vector<Elem>>> block_orders(const std::vector<Partition>& thetas, Elem zero) {
  const std::size_t n = thetas.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::set<std::vector<Partition>> seen;
  std::vector<std::vector<std::vector<Elem>>> out;
  do {
    std::vector<Partition> order;
    for (auto i : perm) order.push_back(thetas[i]);
    if (!seen.insert(order).second) continue;
    std::vector<std::vector<Elem>> blocks;
    for (const auto& t : order) {
      std::vector<Elem> b;
      for (std::size_t x = 0; x < t.size(); ++x)
        if (t.related(zero, x)) b.push_back(static_cast<Elem>(x));
      blocks.push_back(std::move(b));
    }
    out.push_back(std::move(blocks));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct WitnessCollector {
  const FiniteAlgebra& A;
  Elem zero;
  std::vector<char> hit;
  std::vector<ElemPair> pairs;
  std::vector<Certificate>& certs;

  // Records (zero, f(b)) for b ranging over the block product.
  bool absorb(const FunctionTable& f, const std::vector<std::vector<Elem>>& blocks, const std::string& term) {
    const std::size_t n = blocks.size();
    std::vector<std::size_t> pos(n, 0);
    std::vector<Elem> b(n);
    bool grew = false;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) b[i] = blocks[i][pos[i]];
      Elem v = f(b);
      if (!hit[v]) {
        hit[v] = 1;
        if (v != zero) {
          pairs.emplace_back(zero, v);
          Certificate c;
          c.kind = "witness";
          c.term = term;
          c.args = b;
          c.pair = ElemPair{zero, v};
          certs.push_back(std::move(c));
          grew = true;
        }
      }
      std::size_t i = n;
      while (i-- > 0) {
        if (++pos[i] < blocks[i].size()) break;
        pos[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return grew;
  }
};

}  // namespace

Partition CommutatorEngine::lower_from_witnesses(const std::vector<Partition>& thetas, const Partition& stop_at,
                                                 std::vector<Certificate>& certs, std::vector<std::string>& caps) {
  const std::size_t n = thetas.size();
  const std::size_t N = A_.size();
  const Elem zero = 0;
  WitnessCollector wc{A_, zero, std::vector<char>(N, 0), {}, certs};
  wc.hit[zero] = 1;
  Partition lower = Partition::zero(N);
  auto refresh = [&]() {
    lower = congruence_closure(A_, wc.pairs);
    return lower == stop_at;
  };
  auto orders = block_orders(thetas, zero);

  // Seeds: basic ops absorbing at (0,...,0) to 0.
  std::vector<std::size_t> seeds;
  for (std::size_t oi = 0; oi < A_.ops().size(); ++oi) {
    const auto& op = A_.op(oi);
    if (op.arity < 2) continue;
    FunctionTable f(N, op.arity, op.table);
    std::vector<Elem> point(op.arity, zero);
    if (is_absorbing(f, point, zero)) seeds.push_back(oi);
  }

  std::size_t budget = opt_.composite_budget;
  TupleStore tried(N, checked_pow(N, n));
  bool done = false;

  // Terms with exactly v variables x0..x(v-1), each used once, built from
  // seeds whose slots hold variables, constants or smaller such terms.
  std::function<void(std::size_t, std::size_t, const std::function<void(const Term&)>&)> compose;
  compose = [&](std::size_t v, std::size_t depth, const std::function<void(const Term&)>& emit) {
    if (done) return;
    if (v == 1) emit(Term::var(0));
    if (depth == 0) return;
    for (auto oi : seeds) {
      const auto& op = A_.op(oi);
      const std::size_t k = op.arity;
      std::vector<Term> slots(k);
      std::function<void(std::size_t, std::size_t, std::size_t)> fill = [&](std::size_t slot, std::size_t left,
                                                                            std::size_t used) {
        if (done) return;
        if (slot == k) {
          if (left == 0 && used > 0) emit(Term::apply(op.symbol, slots));
          return;
        }
        // Variable-carrying slot first, larger groups first.
        for (std::size_t c = left; c >= 1; --c) {
          if (c == v && depth == 1 && k > 1 && false) continue;
          std::size_t offset = v - left;
          compose(c, depth - 1, [&](const Term& sub) {
            std::vector<Term> shift;
            for (std::size_t j = 0; j < c; ++j) shift.push_back(Term::var(offset + j));
            slots[slot] = sub.substitute(shift);
            fill(slot + 1, left - c, used + 1);
          });
          if (done) return;
        }
        for (std::size_t e = 0; e < N; ++e) {
          slots[slot] = Term::constant(static_cast<Elem>(e));
          fill(slot + 1, left, used);
          if (done) return;
        }
      };
      fill(0, v, 0);
      if (done) return;
    }
  };

  for (std::size_t depth = 1; depth <= 3 && !done && !seeds.empty(); ++depth) {
    compose(n, depth, [&](const Term& t) {
      if (done) return;
      if (budget == 0) {
        done = true;
        caps.push_back(cap_note("composite-budget", opt_.composite_budget));
        return;
      }
      --budget;
      FunctionTable f = term_to_table(A_, t, n);
      if (!tried.insert(f.values)) return;
      bool grew = false;
      for (const auto& blocks : orders) grew = wc.absorb(f, blocks, t.to_string()) || grew;
      if (grew && refresh()) done = true;
    });
  }
  refresh();
  if (lower == stop_at) return lower;

  // Exhaustive Ab^n_0 when the table space is small enough.
  if (checked_pow(N, n) <= (std::size_t{1} << 16)) {
    const auto& ab = absorbing(n, zero);
    if (!ab.exhaustive) caps.push_back(cap_note("clone-cap", opt_.clone_cap));
    for (std::size_t i = 0; i < ab.members.size(); ++i) {
      std::string term = i < ab.terms.size() ? ab.terms[i].to_string() : "Ab-member#" + std::to_string(i);
      bool grew = false;
      for (const auto& blocks : orders) grew = wc.absorb(ab.members[i], blocks, term) || grew;
      if (grew && refresh()) break;
    }
  }
  refresh();
  return lower;
}

CommutatorResult CommutatorEngine::bracket(std::span<const Partition> thetas_in) {
  std::vector<Partition> thetas(thetas_in.begin(), thetas_in.end());
  const std::size_t N = A_.size();
  CommutatorResult r;
  r.inputs = thetas;
  r.path = "bracket";
  r.method = CommutatorMethod::witness_lower_bound;
  r.upper_method = CommutatorMethod::quotient_upper_bound;
  Partition top = meet_all(N, thetas);
  r.upper = top;
  r.caps.push_back(cap_note("delta-cap", opt_.delta_cap));
  r.caps.push_back(cap_note("clone-cap", opt_.clone_cap));

  // Upper bound: meet of all gamma <= meet(thetas) with C(thetas; gamma),
  // each tested as a vanishing commutator in A/gamma.
  const auto& L = lattice();
  for (std::size_t gi = L.size(); gi-- > 0;) {
    const Partition& gamma = L[gi];
    if (!leq(gamma, top) || leq(r.upper, gamma)) continue;
    Quotient q = quotient_algebra(A_, gamma);
    CommutatorEngine sub(q.algebra, opt_);
    std::vector<Partition> qt;
    for (const auto& t : thetas) qt.push_back(quotient_partition(q, t));
    try {
      auto qr = sub.exact(qt);
      if (qr.value.is_zero()) {
        r.upper = meet(r.upper, gamma);
        Certificate c;
        c.kind = "quotient";
        c.detail = "commutator vanishes in A/" + gamma.to_string() + " (" + qr.path + ", log2|Delta|=" +
                   std::to_string(qr.delta_log2_size) + ")";
        r.certificates.push_back(std::move(c));
      }
    } catch (const IndeterminateError& e) {
      r.caps.push_back("quotient " + gamma.to_string() + ": " + e.cap());
    }
  }

  r.value = lower_from_witnesses(thetas, r.upper, r.certificates, r.caps);
  r.exact = r.value == r.upper;
  return r;
}

CommutatorResult CommutatorEngine::absorbing_route(std::span<const Partition> thetas_in, Elem zero) {
  std::vector<Partition> thetas(thetas_in.begin(), thetas_in.end());
  const std::size_t n = thetas.size();
  CommutatorResult r;
  r.inputs = thetas;
  r.method = r.upper_method = CommutatorMethod::absorbing_generators;
  r.path = "absorbing";
  const auto& ab = absorbing(n, zero);
  r.caps.push_back(cap_note("clone-cap", opt_.clone_cap));
  if (!ab.exhaustive) throw IndeterminateError("absorbing enumeration exceeded its cap", cap_note("clone-cap", opt_.clone_cap));
  std::vector<Certificate> certs;
  WitnessCollector wc{A_, zero, std::vector<char>(A_.size(), 0), {}, certs};
  wc.hit[zero] = 1;
  std::vector<std::vector<Elem>> blocks;
  for (const auto& t : thetas) {
    std::vector<Elem> b;
    for (std::size_t x = 0; x < A_.size(); ++x)
      if (t.related(zero, x)) b.push_back(static_cast<Elem>(x));
    blocks.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < ab.members.size(); ++i)
    wc.absorb(ab.members[i], blocks, i < ab.terms.size() ? ab.terms[i].to_string() : "Ab-member#" + std::to_string(i));
  r.value = r.upper = congruence_closure(A_, wc.pairs);
  r.certificates = std::move(certs);
  return r;
}

CentralizerResult CommutatorEngine::centralizes(std::span<const Partition> thetas, const Partition& beta,
                                                const Partition& delta) {
  std::vector<Partition> all(thetas.begin(), thetas.end());
  all.push_back(beta);
  const std::size_t n = all.size();
  const std::size_t width = std::size_t{1} << n;
  if (plan_) {
    auto r = exact(all);
    CentralizerResult c;
    c.holds = leq(r.value, delta);
    if (!c.holds)
      for (const auto& cert : r.certificates)
        if (cert.kind == "pivot-cube") c.violating_cube = cert.cube;
    return c;
  }
  auto gens = cube_generators(A_, all);
  CubeSet cs = generate_delta(A_, n, gens, opt_);
  if (!cs.complete()) throw IndeterminateError("cube closure exceeded its cap", cap_note("delta-cap", opt_.delta_cap));
  const Subpower& S = *cs.explicit_set();
  const std::size_t top0 = width - 2, top1 = width - 1;
  for (std::size_t i = 0; i < S.size(); ++i) {
    auto u = S[i];
    bool premise = true;
    for (std::size_t v = 0; v < top0 && premise; v += 2) premise = delta.related(u[v], u[v + 1]);
    if (premise && !delta.related(u[top0], u[top1])) return {false, std::vector<Elem>(u.begin(), u.end())};
  }
  return {true, std::nullopt};
}

SeriesResult CommutatorEngine::series(const Partition& theta, const std::string& kind, std::size_t max_len,
                                      std::size_t m) {
  SeriesResult s;
  s.kind = kind;
  s.terms.push_back(theta);
  if (kind == "nested") {
    s.terms = nested_commutator_set(theta, max_len, 3);
    s.stabilized = true;
    return s;
  }
  while (s.terms.size() < max_len) {
    const Partition& cur = s.terms.back();
    if (cur.is_zero()) {
      s.stabilized = true;
      break;
    }
    std::vector<Partition> args;
    if (kind == "lower-central") {
      args = {theta, cur};
    } else if (kind == "derived") {
      args = {cur, cur};
    } else if (kind == "supernil") {
      args.assign(m, cur);
    } else {
      throw AlgebraError("unknown series kind " + kind);
    }
    auto r = commutator(args);
    if (!r.exact) {
      s.exact = false;
      s.terms.push_back(r.value);
      break;
    }
    if (r.value == cur) {
      s.stabilized = true;
      break;
    }
    s.terms.push_back(r.value);
  }
  return s;
}

SupernilpotenceResult CommutatorEngine::supernilpotence_class(std::size_t max_n) {
  SupernilpotenceResult out;
  out.lower_bound = 2;
  const Partition one = Partition::one(A_.size());
  for (std::size_t k = 2; k <= max_n; ++k) {
    std::vector<Partition> args(k, one);
    auto r = commutator(args);
    out.evidence.push_back(r);
    if (r.exact && r.value.is_zero()) {
      out.klass = k;
      out.lower_bound = k;
      return out;
    }
    if (!r.value.is_zero()) {
      out.lower_bound = k + 1;
      continue;
    }
    out.lower_bound = k;
    return out;
  }
  return out;
}

NeutralityResult CommutatorEngine::check_neutrality(std::size_t n, std::size_t budget) {
  NeutralityResult out;
  const auto& L = lattice();
  const std::size_t N = A_.size();
  auto test = [&](const std::vector<Partition>& args) {
    ++out.tuples_checked;
    auto r = commutator(args);
    Partition m = meet_all(N, args);
    if (!r.exact) {
      // lower <= value <= upper; a definite failure needs upper < meet.
      if (r.upper != m) {
        out.holds = false;
        out.counterexample = args;
        out.counterexample_value = r.upper;
        return false;
      }
      if (r.value != m) out.exhaustive = false;
      return true;
    }
    if (r.value != m) {
      out.holds = false;
      out.counterexample = args;
      out.counterexample_value = r.value;
      return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < L.size(); ++i)
    if (!test(std::vector<Partition>(n, L[i]))) return out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    if (out.tuples_checked >= budget) {
      out.exhaustive = false;
      break;
    }
    std::vector<Partition> args;
    for (auto i : idx) args.push_back(L[i]);
    if (!test(args)) return out;
    std::size_t s = n;
    while (s-- > 0) {
      if (++idx[s] < L.size()) break;
      idx[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

std::string tuple_string(const std::vector<Partition>& args) {
  std::string s = "[";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i].to_string();
  return s + "]";
}

}  // namespace

HcReport CommutatorEngine::check_hc_properties(const std::set<std::string>& props, std::size_t n,
                                               std::size_t sample_budget, bool malcev) {
  HcReport rep;
  const auto& L = lattice();
  const std::size_t N = A_.size();
  // Tuples: exhaustive when small, otherwise a fixed-seed sample.
  std::vector<std::vector<std::size_t>> tuples;
  double total = std::pow(static_cast<double>(L.size()), static_cast<double>(n));
  if (total <= static_cast<double>(sample_budget)) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      tuples.push_back(idx);
      std::size_t s = n;
      while (s-- > 0) {
        if (++idx[s] < L.size()) break;
        idx[s] = 0;
      }
      if (s == static_cast<std::size_t>(-1)) break;
    }
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, L.size() - 1);
    for (std::size_t t = 0; t < sample_budget; ++t) {
      std::vector<std::size_t> idx(n);
      for (auto& i : idx) i = pick(rng);
      tuples.push_back(idx);
    }
  }
  auto args_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<Partition> a;
    for (auto i : idx) a.push_back(L[i]);
    return a;
  };
  auto value = [&](const std::vector<Partition>& a) -> std::optional<Partition> {
    auto r = commutator(a);
    if (!r.exact) return std::nullopt;
    return r.value;
  };
  static const std::set<std::string> needs_malcev{"HC4", "HC5", "HC6", "HC7", "HC8"};

  for (const auto& p : props) {
    HcReport::Entry e;
    e.property = p;
    e.status = "pass";
    if (needs_malcev.count(p) && !malcev) {
      e.status = "skipped";
      e.witness = "requires a Mal'cev term";
      rep.entries.push_back(e);
      continue;
    }
    auto fail = [&](const std::string& w) {
      if (e.status == "pass") {
        e.status = "fail";
        e.witness = w;
      }
    };
    bool indeterminate = false;
    for (const auto& idx : tuples) {
      if (e.status == "fail") break;
      auto a = args_of(idx);
      auto v = value(a);
      if (!v) {
        indeterminate = true;
        continue;
      }
      ++e.cases;
      if (p == "HC1") {
        if (!leq(*v, meet_all(N, a))) fail(tuple_string(a));
      } else if (p == "HC2") {
        for (std::size_t i = 0; i < n; ++i)
          for (auto up : L.covers()[idx[i]]) {
            auto b = a;
            b[i] = L[up];
            auto w = value(b);
            if (w && !leq(*v, *w)) fail(tuple_string(a) + " <= " + tuple_string(b));
          }
      } else if (p == "HC3") {
        if (n >= 2) {
          std::vector<Partition> tail(a.begin() + 1, a.end());
          auto w = value(tail);
          if (w && !leq(*v, *w)) fail(tuple_string(a));
        }
      } else if (p == "HC4") {
        for (std::size_t i = 0; i + 1 < n; ++i) {
          auto b = a;
          std::swap(b[i], b[i + 1]);
          auto w = value(b);
          if (w && *w != *v) fail(tuple_string(a) + " vs " + tuple_string(b));
        }
      } else if (p == "HC5") {
        std::vector<Partition> head(a.begin(), a.end() - 1);
        for (std::size_t j = 0; j < L.size(); ++j) {
          bool c = centralizes(head, a.back(), L[j]).holds;
          if (c != leq(*v, L[j])) fail(tuple_string(a) + " eta=" + L[j].to_string());
        }
      } else if (p == "HC6") {
        Partition m = meet_all(N, a);
        for (std::size_t j = 0; j < L.size(); ++j) {
          if (!leq(L[j], m)) continue;
          Quotient q = quotient_algebra(A_, L[j]);
          CommutatorEngine sub(q.algebra, opt_);
          std::vector<Partition> qa;
          for (const auto& t : a) qa.push_back(quotient_partition(q, t));
          auto qr = sub.commutator(qa);
          if (!qr.exact) continue;
          Partition expect = quotient_partition(q, join(A_, *v, L[j]));
          if (qr.value != expect) fail(tuple_string(a) + " eta=" + L[j].to_string());
        }
      } else if (p == "HC7") {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < L.size(); ++j)
            for (std::size_t k = j; k < L.size(); ++k) {
              if (L.join_index(j, k) != idx[i]) continue;
              auto b = a, c = a;
              b[i] = L[j];
              c[i] = L[k];
              auto vb = value(b), vc = value(c);
              if (vb && vc && join(A_, *vb, *vc) != *v) fail(tuple_string(a) + " split at " + std::to_string(i));
            }
      } else if (p == "HC8") {
        for (std::size_t i = 1; i + 1 < n; ++i) {
          std::vector<Partition> inner(a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
          auto w = value(inner);
          if (!w) continue;
          std::vector<Partition> outer(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
          outer.push_back(*w);
          auto u = value(outer);
          if (u && !leq(*u, *v)) fail(tuple_string(a) + " at i=" + std::to_string(i + 1));
        }
      } else {
        e.status = "skipped";
        e.witness = "unknown property";
        break;
      }
    }
    if (e.status == "pass" && indeterminate) e.status = "indeterminate";
    rep.entries.push_back(e);
  }
  return rep;
}

std::vector<Partition> CommutatorEngine::nested_commutator_set(const Partition& theta, std::size_t depth,
                                                               std::size_t max_arity, std::size_t budget) {
  std::vector<Partition> all{theta};
  std::set<Partition> seen{theta};
  std::size_t spent = 0;
  for (std::size_t level = 2; level <= depth; ++level) {
    std::vector<Partition> pool = all;
    std::vector<Partition> fresh;
    for (std::size_t m = 2; m <= max_arity; ++m) {
      std::vector<std::size_t> idx(m, 0);
      while (true) {
        if (++spent > budget) throw IndeterminateError("nested commutator budget exhausted", cap_note("budget", budget));
        std::vector<Partition> args;
        for (auto i : idx) args.push_back(pool[i]);
        auto r = commutator(args);
        if (!r.exact) throw IndeterminateError("nested commutator not exact", r.caps.empty() ? "" : r.caps.back());
        if (seen.insert(r.value).second) fresh.push_back(r.value);
        std::size_t s = m;
        while (s-- > 0) {
          if (++idx[s] < pool.size()) break;
          idx[s] = 0;
        }
        if (s == static_cast<std::size_t>(-1)) break;
      }
    }
    if (fresh.empty()) break;
    all.insert(all.end(), fresh.begin(), fresh.end());
  }
  return all;
}

CentralizerResult centralizes(const FiniteAlgebra& A, std::span<const Partition> thetas, const Partition& beta,
                              const Partition& delta, const EngineOptions& options) {
  CommutatorEngine e(A, options);
  return e.centralizes(thetas, beta, delta);
}

CommutatorResult higher_commutator(const FiniteAlgebra& A, std::span<const Partition> thetas,
                                   const EngineOptions& options) {
  CommutatorEngine e(A, options);
  return e.commutator(thetas);
}

}  // namespace hicomm
