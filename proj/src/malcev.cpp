#include "hicomm/malcev.hpp"

#include <array>
#include <algorithm>
#include <functional>

#include "json.hpp"

namespace hicomm {

std::optional<std::pair<Elem, Elem>> malcev_violation(const FiniteAlgebra& A, const Term& m) {
  const std::size_t n = A.size();
  FunctionTable t = term_to_table(A, m, 3);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Elem ex = static_cast<Elem>(x), ey = static_cast<Elem>(y);
      if (t({ex, ey, ey}) != ex || t({ey, ey, ex}) != ex) return std::make_pair(ex, ey);
    }
  return std::nullopt;
}

MalcevSearch find_malcev_term(const FiniteAlgebra& A, std::size_t budget) {
  MalcevSearch out;
  const Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
  if (auto q = find_quasigroup_ops(A)) {
    const auto& mul = A.op(q->mult).symbol;
    const auto& ld = A.op(q->ldiv).symbol;
    const auto& rd = A.op(q->rdiv).symbol;
    Term m = Term::apply(mul, {Term::apply(rd, {x, Term::apply(ld, {y, y})}), Term::apply(ld, {y, z})});
    if (!malcev_violation(A, m)) {
      out.term = m;
      out.method = "quasigroup";
      return out;
    }
  }
  out.method = "closure";
  const std::size_t n = A.size();
  // Columns: the distinct triples (a,b,b) and (b,b,a); required value a.
  std::vector<std::array<Elem, 3>> cols;
  std::vector<Elem> want;
  std::vector<char> seen(n * n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::array<Elem, 3> t1{static_cast<Elem>(a), static_cast<Elem>(b), static_cast<Elem>(b)};
      std::array<Elem, 3> t2{static_cast<Elem>(b), static_cast<Elem>(b), static_cast<Elem>(a)};
      for (const auto& t : {t1, t2}) {
        std::size_t code = (t[0] * n + t[1]) * n + t[2];
        if (seen[code]) continue;
        seen[code] = 1;
        cols.push_back(t);
        want.push_back(static_cast<Elem>(a));
      }
    }
  std::vector<std::vector<Elem>> gens(3, std::vector<Elem>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < 3; ++i) gens[i][j] = cols[j][i];
  ClosureOptions co;
  co.cap = budget;
  co.provenance = true;
  co.stop_when = [&](std::span<const Elem> u) { return std::equal(u.begin(), u.end(), want.begin()); };
  Subpower S = generate_subpower(A, cols.size(), gens, co);
  out.explored = S.size();
  std::vector<Term> gen_terms{x, y, z};
  std::optional<std::size_t> hit = S.stop_index();
  if (!hit) hit = S.find(want);
  if (hit) {
    out.term = provenance_term(A, S, *hit, gen_terms);
    return out;
  }
  out.exhausted = S.complete();
  return out;
}

FgTerms build_fg_terms(const Term& m, std::size_t k) {
  const Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
  auto M = [&](const Term& a, const Term& b, const Term& c) { return m.substitute({a, b, c}); };
  Term f = x, g = z;
  for (std::size_t i = 0; i < k; ++i) {
    f = M(y, M(y, x, M(f, y, z)), f);
    g = M(g, M(M(x, y, g), z, y), y);
  }
  return {f, g};
}

namespace {

IdentityCheck failure(std::string name, std::vector<Elem> w) {
  IdentityCheck c;
  c.ok = false;
  c.failed = std::move(name);
  c.witness = std::move(w);
  return c;
}

}  // namespace

IdentityCheck verify_fg_inverses(const FiniteAlgebra& A, const Term& m, std::size_t class_n) {
  const std::size_t n = A.size();
  auto fg = build_fg_terms(m, class_n);
  FunctionTable M = term_to_table(A, m, 3), F = term_to_table(A, fg.f, 3), G = term_to_table(A, fg.g, 3);
  for (std::size_t bi = 0; bi < n; ++bi)
    for (std::size_t ci = 0; ci < n; ++ci)
      for (std::size_t xi = 0; xi < n; ++xi) {
        Elem b = static_cast<Elem>(bi), c = static_cast<Elem>(ci), x = static_cast<Elem>(xi);
        if (M({F({x, b, c}), b, c}) != x) return failure("m(f_n(x,b,c),b,c) = x", {b, c, x});
        if (F({M({x, b, c}), b, c}) != x) return failure("f_n(m(x,b,c),b,c) = x", {b, c, x});
        if (M({c, b, G({c, b, x})}) != x) return failure("m(c,b,g_n(c,b,x)) = x", {b, c, x});
        if (G({c, b, M({c, b, x})}) != x) return failure("g_n(c,b,m(c,b,x)) = x", {b, c, x});
      }
  for (std::size_t xi = 0; xi < n; ++xi)
    for (std::size_t yi = 0; yi < n; ++yi) {
      Elem x = static_cast<Elem>(xi), y = static_cast<Elem>(yi);
      if (F({y, x, x}) != y) return failure("f_n(y,x,x) = y", {x, y});
      if (F({x, y, x}) != y) return failure("f_n(x,y,x) = y", {x, y});
      if (G({x, x, y}) != y) return failure("g_n(x,x,y) = y", {x, y});
      if (G({x, y, x}) != y) return failure("g_n(x,y,x) = y", {x, y});
    }
  return {};
}

IdentityCheck verify_loop(const LoopReduct& L) {
  const std::size_t n = L.size();
  const Elem o = L.zero;
  for (std::size_t xi = 0; xi < n; ++xi) {
    Elem x = static_cast<Elem>(xi);
    if (L.mul(o, x) != x || L.mul(x, o) != x) return failure("0*x = x*0 = x", {x});
    if (L.left_div(o, x) != x) return failure("0\\x = x", {x});
    if (L.right_div(x, o) != x) return failure("x/0 = x", {x});
    if (L.left_div(x, x) != o) return failure("x\\x = 0", {x});
    if (L.right_div(x, x) != o) return failure("x/x = 0", {x});
    for (std::size_t yi = 0; yi < n; ++yi) {
      Elem y = static_cast<Elem>(yi);
      if (L.left_div(x, L.mul(x, y)) != y) return failure("x\\(x*y) = y", {x, y});
      if (L.right_div(L.mul(x, y), y) != x) return failure("(x*y)/y = x", {x, y});
      if (L.mul(x, L.left_div(x, y)) != y) return failure("x*(x\\y) = y", {x, y});
      if (L.mul(L.right_div(x, y), y) != x) return failure("(x/y)*y = x", {x, y});
    }
  }
  return {};
}

LoopReduct loop_reduct(const FiniteAlgebra& A, const Term& m, Elem zero, std::size_t class_n) {
  const std::size_t n = A.size();
  if (zero >= n) throw AlgebraError("zero element out of range");
  auto inv = verify_fg_inverses(A, m, class_n);
  if (!inv.ok) throw AlgebraError("f/g inverse check failed at class " + std::to_string(class_n) + ": " + inv.failed);
  auto fg = build_fg_terms(m, class_n);
  FunctionTable M = term_to_table(A, m, 3), F = term_to_table(A, fg.f, 3), G = term_to_table(A, fg.g, 3);
  LoopReduct L;
  L.base = &A;
  L.zero = zero;
  std::vector<Elem> mul(n * n), ld(n * n), rd(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Elem ex = static_cast<Elem>(x), ey = static_cast<Elem>(y);
      mul[x * n + y] = M({ex, zero, ey});
      ld[x * n + y] = G({ex, zero, ey});
      rd[x * n + y] = F({ex, zero, ey});
    }
  L.mult = FunctionTable(n, 2, std::move(mul), zero);
  L.ldiv = FunctionTable(n, 2, std::move(ld), zero);
  L.rdiv = FunctionTable(n, 2, std::move(rd), zero);
  auto ax = verify_loop(L);
  if (!ax.ok) throw AlgebraError("loop axiom fails: " + ax.failed);
  return L;
}

FiniteAlgebra loop_algebra(const LoopReduct& L, bool include_base) {
  const std::size_t n = L.size();
  std::vector<Operation> ops{{"*", 2, L.mult.values}, {"\\", 2, L.ldiv.values}, {"/", 2, L.rdiv.values}};
  auto taken = [&](const std::string& s) {
    return std::any_of(ops.begin(), ops.end(), [&](const Operation& o) { return o.symbol == s; });
  };
  for (const auto& [name, f] : L.extras) {
    if (taken(name)) throw AlgebraError("extra operation name " + name + " collides");
    ops.push_back({name, f.arity, f.values});
  }
  if (include_base && L.base)
    for (const auto& op : L.base->ops()) {
      std::string s = op.symbol;
      while (taken(s)) s = "base." + s;
      ops.push_back({s, op.arity, op.table});
    }
  return FiniteAlgebra((L.base ? L.base->name() : std::string("loop")) + "-loop", n, std::move(ops));
}

namespace {

// All k-element subsets of 0..n-1 in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(s);
    std::size_t i = k;
    while (i-- > 0) {
      if (s[i] < n - k + i) break;
    }
    if (i == static_cast<std::size_t>(-1)) break;
    ++s[i];
    for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return out;
}

}  // namespace

Elem evaluate_representation(const LoopReduct& L, const Representation& rep, std::span<const Elem> args) {
  Elem acc = rep.c;
  std::vector<Elem> sub;
  for (const auto& layer : rep.layers) {
    Elem r = L.zero;
    bool first = true;
    for (const auto& e : layer) {
      sub.resize(e.subset.size());
      for (std::size_t i = 0; i < e.subset.size(); ++i) sub[i] = args[e.subset[i]];
      Elem v = e.table(sub);
      r = first ? v : L.mul(r, v);
      first = false;
    }
    acc = L.mul(acc, r);
  }
  return acc;
}

Representation interpolation_representation(const LoopReduct& L, const FunctionTable& f, std::size_t degree) {
  if (degree == 0) throw AlgebraError("degree must be at least 1");
  const std::size_t n = L.size(), k = f.arity;
  if (f.universe != n) throw AlgebraError("table universe mismatch");
  Representation rep;
  rep.arity = k;
  rep.degree = std::min(k, degree);
  std::vector<Elem> zeros(k, L.zero);
  rep.c = f(zeros);
  std::vector<Elem> args(k), sub;
  for (std::size_t m = 1; m <= k; ++m) {
    std::vector<RepresentationEntry> layer;
    for (auto& S : subsets_of_size(k, m)) {
      std::vector<Elem> table(checked_pow(n, m));
      sub.assign(m, 0);
      for (std::size_t idx = 0; idx < table.size(); ++idx) {
        index_to_tuple(idx, n, sub);
        std::fill(args.begin(), args.end(), L.zero);
        for (std::size_t i = 0; i < m; ++i) args[S[i]] = sub[i];
        table[idx] = L.left_div(evaluate_representation(L, rep, args), f(args));
      }
      FunctionTable t(n, m, std::move(table), L.zero);
      if (m > rep.degree) {
        if (!t.is_constant(L.zero)) {
          std::string s;
          for (auto i : S) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
          throw ResidualError("residual layer on {" + s + "} is not constant 0", S);
        }
        continue;
      }
      layer.push_back({S, std::move(t)});
    }
    if (m <= rep.degree) rep.layers.push_back(std::move(layer));
  }
  return rep;
}

IdentityCheck verify_representation(const LoopReduct& L, const Representation& rep, const FunctionTable& f) {
  const std::size_t n = L.size();
  if (rep.arity != f.arity) return failure("arity mismatch", {});
  if (rep.layers.size() > rep.arity) return failure("too many layers", {});
  for (std::size_t m = 1; m <= rep.layers.size(); ++m)
    for (const auto& e : rep.layers[m - 1]) {
      if (e.subset.size() != m || e.table.arity != m || e.table.universe != n) return failure("entry shape", {});
      std::vector<Elem> point(m, L.zero);
      if (!is_absorbing(e.table, point, L.zero)) {
        std::vector<Elem> w(e.subset.begin(), e.subset.end());
        return failure("entry not 0-absorbing", w);
      }
    }
  std::vector<Elem> args(rep.arity);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    index_to_tuple(idx, n, args);
    if (evaluate_representation(L, rep, args) != f.values[idx]) return failure("reconstruction", args);
  }
  return {};
}

std::string representation_to_json(const Representation& rep) {
  nlohmann::json j;
  j["arity"] = rep.arity;
  j["degree"] = rep.degree;
  j["c"] = rep.c;
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : rep.layers) {
    auto jl = nlohmann::json::array();
    for (const auto& e : layer) {
      std::vector<std::size_t> s1;
      for (auto i : e.subset) s1.push_back(i + 1);
      std::vector<int> table(e.table.values.begin(), e.table.values.end());
      jl.push_back({{"S", s1}, {"table", table}});
    }
    j["layers"].push_back(jl);
  }
  return j.dump();
}

Representation representation_from_json(const std::string& text, std::size_t universe) {
  Representation rep;
  try {
    auto j = nlohmann::json::parse(text);
    rep.arity = j.at("arity").get<std::size_t>();
    rep.degree = j.at("degree").get<std::size_t>();
    rep.c = static_cast<Elem>(j.at("c").get<int>());
    for (const auto& jl : j.at("layers")) {
      std::vector<RepresentationEntry> layer;
      for (const auto& e : jl) {
        RepresentationEntry re;
        for (auto i : e.at("S").get<std::vector<std::size_t>>()) {
          if (i == 0) throw AlgebraError("subset indices are 1-based");
          re.subset.push_back(i - 1);
        }
        std::vector<Elem> vals;
        for (int v : e.at("table").get<std::vector<int>>()) {
          if (v < 0 || static_cast<std::size_t>(v) >= universe) throw AlgebraError("table value out of range");
          vals.push_back(static_cast<Elem>(v));
        }
        if (vals.size() != checked_pow(universe, re.subset.size())) throw AlgebraError("table length mismatch");
        re.table = FunctionTable(universe, re.subset.size(), std::move(vals));
        layer.push_back(std::move(re));
      }
      rep.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw AlgebraError(std::string("bad representation JSON: ") + e.what());
  }
  return rep;
}

namespace {

// First coordinate/tuple where f fails to distribute over the loop product.
std::optional<std::vector<Elem>> distributivity_violation(const LoopReduct& L, const FunctionTable& f) {
  const std::size_t n = L.size(), k = f.arity;
  std::vector<Elem> rest(k), a(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
      index_to_tuple(idx, n, rest);
      for (std::size_t y = 0; y < n; ++y) {
        a = rest;
        Elem x = rest[i];
        a[i] = L.mul(x, static_cast<Elem>(y));
        Elem lhs = f(a);
        a[i] = static_cast<Elem>(y);
        Elem fy = f(a);
        if (lhs != L.mul(f.values[idx], fy)) {
          std::vector<Elem> w = rest;
          w.push_back(static_cast<Elem>(y));
          w.push_back(static_cast<Elem>(i + 1));
          return w;
        }
      }
    }
  return std::nullopt;
}

std::string tuple_str(const std::vector<Elem>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

}  // namespace

NtypeReport verify_ntype(const LoopReduct& L, std::size_t n, const EngineOptions& options) {
  if (n < 2) throw AlgebraError("n-type needs n >= 2");
  NtypeReport rep;
  rep.n = n;
  FiniteAlgebra T = loop_algebra(L, true);
  const std::size_t N = T.size();

  // The loop operations are polynomials of the base, so base ops plus extras
  // span the same clone with fewer generators.
  std::vector<Operation> span_ops;
  if (L.base) span_ops = L.base->ops();
  else span_ops = {T.ops().begin(), T.ops().begin() + 3};
  for (const auto& [name, f] : L.extras) span_ops.push_back({"extra." + name, f.arity, f.values});
  FiniteAlgebra span_algebra(T.name(), N, std::move(span_ops));

  // (1) extras are absorbing of arity <= n-1, and every basic operation has a
  // degree n-1 representation, so absorbing polynomials of arity <= n-1
  // together with the loop operations generate all polynomials.
  rep.generation = {"pass", ""};
  for (const auto& [name, f] : L.extras) {
    std::vector<Elem> point(f.arity, L.zero);
    if (f.arity > n - 1 || !is_absorbing(f, point, L.zero)) {
      rep.generation = {"fail", "extra " + name + " is not an absorbing polynomial of arity <= " + std::to_string(n - 1)};
      break;
    }
  }
  if (rep.generation.status == "pass")
    for (const auto& op : T.ops()) {
      if (op.arity == 0) continue;
      FunctionTable f(N, op.arity, op.table);
      try {
        interpolation_representation(L, f, n - 1);
      } catch (const ResidualError& e) {
        rep.generation = {"fail", "operation " + op.symbol + ": " + e.what()};
        break;
      }
    }

  // (2) members of Ab^{n-1}_0 and extras of arity >= n-1 distribute over "*".
  rep.distributivity = {"pass", ""};
  for (const auto& [name, f] : L.extras) {
    if (f.arity < n - 1) continue;
    if (auto w = distributivity_violation(L, f)) {
      rep.distributivity = {"fail", "extra " + name + " at " + tuple_str(*w) + " (args, y, coordinate)"};
      break;
    }
  }
  if (rep.distributivity.status == "pass") {
    CloneOptions co;
    co.cap = options.clone_cap;
    co.allow_module_path = options.module_path;
    co.max_work = options.max_work;
    auto ab = enumerate_absorbing(span_algebra, n - 1, L.zero, co);
    for (std::size_t i = 0; i < ab.members.size(); ++i)
      if (auto w = distributivity_violation(L, ab.members[i])) {
        std::string who = i < ab.terms.size() ? ab.terms[i].to_string() : "member #" + std::to_string(i);
        rep.distributivity = {"fail", who + " at " + tuple_str(*w) + " (args, y, coordinate)"};
        break;
      }
    if (rep.distributivity.status == "pass") {
      if (!ab.exhaustive)
        rep.distributivity = {"indeterminate", "clone-cap=" + std::to_string(options.clone_cap)};
      else
        rep.distributivity.detail = std::to_string(ab.members.size()) + " members checked";
    }
  }

  // (3) [1,...,1,[1,...,1]_k] = 0 with n arguments, 2 <= k < n.
  rep.nested = {"pass", ""};
  CommutatorEngine engine(span_algebra, options);
  const Partition one = Partition::one(N);
  for (std::size_t k = 2; k < n; ++k) {
    auto inner = engine.commutator(std::vector<Partition>(k, one));
    if (!inner.exact) {
      rep.nested = {"indeterminate", "[1]_" + std::to_string(k) + " not exact"};
      break;
    }
    std::vector<Partition> args(n - 1, one);
    args.push_back(inner.value);
    auto outer = engine.commutator(args);
    if (!outer.value.is_zero()) {
      rep.nested = {"fail", "k=" + std::to_string(k) + " gives " + outer.value.to_string()};
      break;
    }
    if (!outer.exact) {
      rep.nested = {"indeterminate", "k=" + std::to_string(k) + " upper bound " + outer.upper.to_string()};
      break;
    }
  }
  return rep;
}

FunctionTable compose_first_slot(const FunctionTable& t, const FunctionTable& s) {
  if (t.arity == 0 || s.arity == 0) throw AlgebraError("composition needs positive arities");
  if (t.universe != s.universe) throw AlgebraError("universe mismatch");
  const std::size_t n = t.universe, m = t.arity, k = s.arity, M = std::max(m, k);
  std::vector<Elem> out(checked_pow(n, M)), x(M), ta(m);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    index_to_tuple(idx, n, x);
    ta[0] = s(std::span<const Elem>(x.data(), k));
    for (std::size_t i = 1; i < m; ++i) ta[i] = x[i];
    out[idx] = t(ta);
  }
  return FunctionTable(n, M, std::move(out), t.zero);
}

MeasureTerms loop_measure_terms(const LoopReduct& L, const FunctionTable* t) {
  const std::size_t n = L.size();
  auto mul = [&](Elem a, Elem b) { return L.mul(a, b); };
  auto ld = [&](Elem a, Elem b) { return L.left_div(a, b); };
  auto rd = [&](Elem a, Elem b) { return L.right_div(a, b); };
  auto table2 = [&](auto fn) {
    std::vector<Elem> v(n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) v[x * n + y] = fn(static_cast<Elem>(x), static_cast<Elem>(y));
    return FunctionTable(n, 2, std::move(v), L.zero);
  };
  auto table3 = [&](auto fn) {
    std::vector<Elem> v(n * n * n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          v[(x * n + y) * n + z] = fn(static_cast<Elem>(x), static_cast<Elem>(y), static_cast<Elem>(z));
    return FunctionTable(n, 3, std::move(v), L.zero);
  };
  MeasureTerms mt;
  mt.commutator = table2([&](Elem x, Elem y) { return rd(mul(x, y), mul(y, x)); });
  mt.inverse_commutator = table2([&](Elem x, Elem y) { return ld(mul(y, x), mul(x, y)); });
  mt.mixed_commutator = table2([&](Elem x, Elem y) { return rd(ld(y, mul(x, y)), x); });
  mt.assoc_left = table3([&](Elem x, Elem y, Elem z) { return ld(mul(y, z), ld(x, mul(mul(x, y), z))); });
  mt.assoc_right = table3([&](Elem x, Elem y, Elem z) { return ld(mul(x, mul(y, z)), mul(mul(x, y), z)); });

  const std::size_t tn = t ? t->arity : 0;
  if (t) {
    if (t->arity == 0 || t->universe != n) throw AlgebraError("d_t needs a positive-arity table on the loop");
    // d_t(x, y, x2..xk) = (t(x,..) * t(y,..)) \ t(x*y,..)
    std::vector<Elem> v(checked_pow(n, tn + 1)), a(tn + 1), b(tn);
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
      index_to_tuple(idx, n, a);
      std::copy(a.begin() + 2, a.end(), b.begin() + 1);
      b[0] = a[0];
      Elem tx = (*t)(b);
      b[0] = a[1];
      Elem ty = (*t)(b);
      b[0] = mul(a[0], a[1]);
      v[idx] = ld(mul(tx, ty), (*t)(b));
    }
    mt.distributor = FunctionTable(n, tn + 1, std::move(v), L.zero);
  }

  for (std::size_t x = 0; x < n && mt.equations.ok; ++x)
    for (std::size_t y = 0; y < n && mt.equations.ok; ++y) {
      Elem ex = static_cast<Elem>(x), ey = static_cast<Elem>(y);
      Elem xy = mul(ex, ey), yx = mul(ey, ex);
      if (xy != mul(mt.commutator({ex, ey}), yx)) mt.equations = failure("xy = [x,y](yx)", {ex, ey});
      else if (xy != mul(yx, mt.inverse_commutator({ex, ey}))) mt.equations = failure("xy = (yx)[x^-1,y^-1]", {ex, ey});
      else if (xy != mul(ey, mul(mt.mixed_commutator({ex, ey}), ex))) mt.equations = failure("xy = y([y^-1,x]x)", {ex, ey});
      for (std::size_t z = 0; z < n && mt.equations.ok; ++z) {
        Elem ez = static_cast<Elem>(z);
        Elem lhs = mul(xy, ez);
        if (lhs != mul(ex, mul(mul(ey, ez), mt.assoc_left({ex, ey, ez}))))
          mt.equations = failure("(xy)z = x((yz)a1)", {ex, ey, ez});
        else if (lhs != mul(mul(ex, mul(ey, ez)), mt.assoc_right({ex, ey, ez})))
          mt.equations = failure("(xy)z = (x(yz))a2", {ex, ey, ez});
      }
    }
  if (mt.equations.ok && mt.distributor) {
    std::vector<Elem> a(tn + 1), b(tn);
    for (std::size_t idx = 0; idx < mt.distributor->values.size(); ++idx) {
      index_to_tuple(idx, n, a);
      std::copy(a.begin() + 2, a.end(), b.begin() + 1);
      b[0] = a[0];
      Elem tx = (*t)(b);
      b[0] = a[1];
      Elem ty = (*t)(b);
      b[0] = mul(a[0], a[1]);
      if ((*t)(b) != mul(mul(tx, ty), mt.distributor->values[idx])) {
        mt.equations = failure("t(xy,..) = (t(x,..)t(y,..))d_t", a);
        break;
      }
    }
  }

  auto check = [&](const FunctionTable& f, const std::string& name) {
    if (!mt.absorption.ok) return;
    std::vector<Elem> point(f.arity, L.zero);
    if (!is_absorbing(f, point, L.zero)) mt.absorption = failure(name + " not 0-absorbing", {});
  };
  check(mt.commutator, "[x,y]");
  check(mt.inverse_commutator, "[x^-1,y^-1]");
  check(mt.mixed_commutator, "[y^-1,x]");
  check(mt.assoc_left, "a1");
  check(mt.assoc_right, "a2");
  if (mt.distributor) check(*mt.distributor, "d_t");
  return mt;
}

}  // namespace hicomm
