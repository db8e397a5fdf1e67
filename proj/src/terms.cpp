#include "hicomm/terms.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hicomm {

namespace {

IdentityCheck failure(std::string name, std::vector<Elem> w) {
  IdentityCheck c;
  c.ok = false;
  c.failed = std::move(name);
  c.witness = std::move(w);
  return c;
}

// Shared scan for the difference-term family. strict_right demands c(b,b,a) = a.
TermVerdict difference_scan(CommutatorEngine& engine, const Term& c, std::size_t n, bool strict_right) {
  const auto& A = engine.algebra();
  const std::size_t N = A.size();
  FunctionTable C = term_to_table(A, c, 3);
  TermVerdict v;
  for (std::size_t ai = 0; ai < N && v.ok; ++ai)
    for (std::size_t bi = 0; bi < N && v.ok; ++bi) {
      Elem a = static_cast<Elem>(ai), b = static_cast<Elem>(bi);
      Elem left = C({a, b, b}), right = C({b, b, a});
      bool left_trivial = left == a;
      bool right_trivial = right == a;
      if (left_trivial && right_trivial) continue;
      if (strict_right && !right_trivial) {
        v.ok = false;
        v.failed = "c(b,b,a) = a";
        v.witness = {a, b};
        break;
      }
      Partition theta = principal_congruence(A, a, b);
      auto r = engine.commutator(std::vector<Partition>(n, theta));
      if (!r.exact)
        for (const auto& cap : r.caps) v.caps.push_back(cap);
      auto check = [&](Elem x, const std::string& name) {
        if (r.value.related(x, a)) return;
        if (!r.upper.related(x, a)) {
          v.ok = false;
          v.failed = name;
          v.witness = {a, b};
        } else {
          v.exact = false;
        }
      };
      if (!left_trivial) check(left, "c(a,b,b) related to a");
      if (v.ok && !right_trivial) check(right, "c(b,b,a) related to a");
    }
  return v;
}

std::vector<FunctionTable> tables_of(const FiniteAlgebra& A, const std::vector<Term>& d) {
  std::vector<FunctionTable> out;
  for (const auto& t : d) out.push_back(term_to_table(A, t, 3));
  return out;
}

// Identities shared by Gumm and Jonsson sequences.
IdentityCheck common_identities(const FiniteAlgebra& A, const std::vector<FunctionTable>& D) {
  const std::size_t N = A.size(), n = D.size();
  if (n == 0) return failure("empty sequence", {});
  for (std::size_t xi = 0; xi < N; ++xi)
    for (std::size_t yi = 0; yi < N; ++yi)
      for (std::size_t zi = 0; zi < N; ++zi) {
        Elem x = static_cast<Elem>(xi), y = static_cast<Elem>(yi), z = static_cast<Elem>(zi);
        if (D[0]({x, y, z}) != x) return failure("x = d1(x,y,z)", {x, y, z});
        for (std::size_t i = 0; i < n; ++i)
          if (D[i]({x, y, x}) != x) return failure("x = d" + std::to_string(i + 1) + "(x,y,x)", {x, y});
        for (std::size_t i = 1; i < n; ++i) {
          // 1-based index i: even i joins on (x,x,z), odd i on (x,z,z).
          if (i % 2 == 0) {
            if (D[i - 1]({x, x, z}) != D[i]({x, x, z}))
              return failure("d" + std::to_string(i) + "(x,x,z) = d" + std::to_string(i + 1) + "(x,x,z)", {x, z});
          } else if (D[i - 1]({x, z, z}) != D[i]({x, z, z})) {
            return failure("d" + std::to_string(i) + "(x,z,z) = d" + std::to_string(i + 1) + "(x,z,z)", {x, z});
          }
        }
      }
  return {};
}

}  // namespace

TermVerdict verify_weak_difference(CommutatorEngine& engine, const Term& c) {
  return difference_scan(engine, c, 2, false);
}

TermVerdict verify_weak_n_difference(CommutatorEngine& engine, const Term& c, std::size_t n) {
  if (n < 2) throw AlgebraError("n must be at least 2");
  return difference_scan(engine, c, n, false);
}

TermVerdict verify_n_difference(CommutatorEngine& engine, const Term& c, std::size_t n) {
  if (n < 2) throw AlgebraError("n must be at least 2");
  return difference_scan(engine, c, n, true);
}

IdentityCheck verify_gumm_terms(const FiniteAlgebra& A, const std::vector<Term>& d, const Term& q) {
  auto D = tables_of(A, d);
  auto c = common_identities(A, D);
  if (!c.ok) return c;
  FunctionTable Q = term_to_table(A, q, 3);
  const std::size_t N = A.size();
  for (std::size_t xi = 0; xi < N; ++xi)
    for (std::size_t zi = 0; zi < N; ++zi) {
      Elem x = static_cast<Elem>(xi), z = static_cast<Elem>(zi);
      if (D.back()({x, z, z}) != Q({x, z, z})) return failure("dn(x,z,z) = q(x,z,z)", {x, z});
      if (Q({x, x, z}) != z) return failure("q(x,x,z) = z", {x, z});
    }
  return {};
}

IdentityCheck verify_jonsson_terms(const FiniteAlgebra& A, const std::vector<Term>& d) {
  auto D = tables_of(A, d);
  auto c = common_identities(A, D);
  if (!c.ok) return c;
  const std::size_t N = A.size();
  for (std::size_t idx = 0; idx < D.back().values.size(); ++idx)
    if (D.back().values[idx] != idx % N) {
      std::vector<Elem> t(3);
      index_to_tuple(idx, N, t);
      return failure("dn(x,y,z) = z", t);
    }
  return {};
}

TermSequence gumm_sequence(const std::map<std::string, Term>& named) {
  TermSequence seq;
  for (std::size_t i = 1;; ++i) {
    auto it = named.find("d" + std::to_string(i));
    if (it == named.end()) break;
    seq.terms.emplace_back(it->first, it->second);
  }
  seq.n = seq.terms.size();
  if (seq.n == 0) throw AlgebraError("term file has no d1");
  if (auto q = named.find("q"); q != named.end()) {
    seq.kind = "gumm";
    seq.terms.emplace_back("q", q->second);
  } else {
    seq.kind = "jonsson";
  }
  return seq;
}

namespace {

std::vector<Term> d_terms(const TermSequence& seq) {
  std::vector<Term> d;
  for (std::size_t i = 0; i < seq.n; ++i) d.push_back(seq.terms[i].second);
  return d;
}

}  // namespace

TermSequence pad_to_odd(const FiniteAlgebra& A, TermSequence seq) {
  if (seq.n % 2 == 0) {
    auto last = seq.terms[seq.n - 1];
    last.first = "d" + std::to_string(seq.n + 1);
    seq.terms.insert(seq.terms.begin() + static_cast<std::ptrdiff_t>(seq.n), last);
    ++seq.n;
  }
  auto d = d_terms(seq);
  seq.verified = seq.kind == "gumm" ? verify_gumm_terms(A, d, seq.terms.back().second).ok
                                    : verify_jonsson_terms(A, d).ok;
  return seq;
}

Term build_qn(const Term& q, std::size_t m) {
  if (m < 2) throw AlgebraError("q_m needs m >= 2");
  const Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
  Term cur = q;
  for (std::size_t i = 2; i < m; ++i) cur = q.substitute({x, cur.substitute({x, y, y}), cur.substitute({x, y, z})});
  return cur;
}

std::size_t tv_level(std::size_t length) {
  std::size_t m = 3, k = 3;
  while (k < length) {
    k = 2 * k + 1;
    ++m;
  }
  return k == length ? m : 0;
}

std::size_t tv_length(std::size_t m) {
  if (m < 3) throw AlgebraError("t_v needs m >= 3");
  std::size_t k = 3;
  for (std::size_t i = 3; i < m; ++i) k = 2 * k + 1;
  return k;
}

namespace {

Elem tv_eval(const std::vector<FunctionTable>& D, std::span<const std::size_t> v, std::span<const Elem> xs, Elem a,
             Elem b) {
  if (v.size() == 3) return D[v[0]]({a, D[v[1]]({a, xs[2], xs[0]}), D[v[2]]({a, b, xs[1]})});
  const std::size_t k = (v.size() - 1) / 2;
  const std::size_t M = xs.size();  // m + 1
  std::vector<Elem> wx(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(M - 2));
  wx.push_back(xs[M - 1]);
  std::vector<Elem> ux(M - 1, b);
  ux[M - 3] = xs[M - 2];
  Elem tw = tv_eval(D, v.subspan(1, k), wx, a, b);
  Elem tu = tv_eval(D, v.subspan(1 + k, k), ux, a, b);
  return D[v[0]]({a, tw, tu});
}

}  // namespace

FunctionTable build_tv(const FiniteAlgebra& A, const std::vector<Term>& d, const std::vector<std::size_t>& v, Elem a,
                       Elem b) {
  const std::size_t m = tv_level(v.size());
  if (m == 0) throw AlgebraError("t_v index vector has invalid length " + std::to_string(v.size()));
  std::vector<std::size_t> v0;
  for (auto i : v) {
    if (i == 0 || i > d.size()) throw AlgebraError("t_v index out of range");
    v0.push_back(i - 1);
  }
  auto D = tables_of(A, d);
  const std::size_t N = A.size();
  std::vector<Elem> out(checked_pow(N, m)), xs(m);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    index_to_tuple(idx, N, xs);
    out[idx] = tv_eval(D, v0, xs, a, b);
  }
  return FunctionTable(N, m, std::move(out));
}

IdentityCheck verify_tv_claims(const FiniteAlgebra& A, const std::vector<Term>& d, std::size_t m) {
  const std::size_t len = tv_length(m), n = d.size(), N = A.size();
  auto D = tables_of(A, d);
  std::vector<std::size_t> v(len, 0);
  std::vector<Elem> xs(m);
  while (true) {
    for (std::size_t ai = 0; ai < N; ++ai)
      for (std::size_t bi = 0; bi < N; ++bi) {
        Elem a = static_cast<Elem>(ai), b = static_cast<Elem>(bi);
        for (std::size_t mask = 0; mask < (std::size_t{1} << (m - 2)); ++mask) {
          for (std::size_t i = 0; i < m - 2; ++i) xs[i] = (mask >> i) & 1 ? b : a;
          auto witness = [&] {
            std::vector<Elem> w{a, b};
            for (auto i : v) w.push_back(static_cast<Elem>(i + 1));
            return w;
          };
          xs[m - 2] = a;
          xs[m - 1] = a;
          if (tv_eval(D, v, xs, a, b) != a) return failure("t_v(z,a,a) = a", witness());
          xs[m - 1] = b;
          if (tv_eval(D, v, xs, a, b) != a) return failure("t_v(z,a,b) = a", witness());
          if (mask == (std::size_t{1} << (m - 2)) - 1) continue;  // (b,...,b) excluded
          xs[m - 2] = b;
          xs[m - 1] = a;
          Elem left = tv_eval(D, v, xs, a, b);
          xs[m - 1] = b;
          if (left != tv_eval(D, v, xs, a, b)) return failure("t_v(w,b,a) = t_v(w,b,b)", witness());
        }
      }
    std::size_t s = len;
    while (s-- > 0) {
      if (++v[s] < n) break;
      v[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return {};
}

FunctionTable difference_operator(const FiniteAlgebra& A, const Term& m, Elem o,
                                  const std::vector<std::vector<Elem>>& anchors, const FunctionTable& f) {
  std::size_t total = 0;
  std::vector<std::size_t> offset;
  for (const auto& a : anchors) {
    if (a.empty()) throw AlgebraError("empty anchor block");
    offset.push_back(total);
    total += a.size();
  }
  if (anchors.empty() || total != f.arity) throw AlgebraError("anchor blocks do not partition the arity");
  if (f.universe != A.size()) throw AlgebraError("table universe mismatch");
  FunctionTable M = term_to_table(A, m, 3);
  const std::size_t N = A.size();
  std::function<Elem(std::size_t, std::vector<Elem>&)> D = [&](std::size_t k, std::vector<Elem>& args) -> Elem {
    if (k == 0) return f(args);
    Elem first = D(k - 1, args);
    const auto& a = anchors[k - 1];
    std::vector<Elem> saved(args.begin() + static_cast<std::ptrdiff_t>(offset[k - 1]),
                            args.begin() + static_cast<std::ptrdiff_t>(offset[k - 1] + a.size()));
    std::copy(a.begin(), a.end(), args.begin() + static_cast<std::ptrdiff_t>(offset[k - 1]));
    Elem second = D(k - 1, args);
    std::copy(saved.begin(), saved.end(), args.begin() + static_cast<std::ptrdiff_t>(offset[k - 1]));
    return M({first, second, o});
  };
  std::vector<Elem> out(f.values.size()), args(f.arity);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    index_to_tuple(idx, N, args);
    out[idx] = D(anchors.size(), args);
  }
  return FunctionTable(N, f.arity, std::move(out));
}

bool theta_absorbs(const FunctionTable& f, const std::vector<std::vector<std::size_t>>& blocks,
                   std::span<const Elem> point, Elem value, const Partition& theta) {
  if (point.size() != f.arity) throw AlgebraError("absorption point arity mismatch");
  std::vector<char> covered(f.arity, 0);
  for (const auto& b : blocks)
    for (auto i : b) {
      if (i >= f.arity || covered[i]) throw AlgebraError("blocks must partition the coordinates");
      covered[i] = 1;
    }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end())
    throw AlgebraError("blocks must partition the coordinates");
  std::vector<Elem> t(f.arity);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    index_to_tuple(idx, f.universe, t);
    bool pinned = false;
    for (const auto& b : blocks) {
      bool whole = true;
      for (auto i : b) whole = whole && t[i] == point[i];
      pinned = pinned || whole;
    }
    if (pinned && !theta.related(f.values[idx], value)) return false;
  }
  return true;
}

Partition CongruenceMap::operator()(const CongruenceLattice& L, const Partition& p) const {
  auto i = L.index_of(p);
  if (!i) throw AlgebraError("partition " + p.to_string() + " is not in the lattice");
  return values.at(*i);
}

CongruenceMap parse_congruence_map(CommutatorEngine& engine, const std::string& spec) {
  const auto& L = engine.lattice();
  const std::size_t N = engine.algebra().size();
  CongruenceMap f;
  f.spec = spec;
  auto parts = [&] {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto pos = spec.find(':', start);
      out.push_back(spec.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  }();
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      auto v = std::stoul(s, &used);
      if (used != s.size()) throw AlgebraError("");
      return static_cast<std::size_t>(v);
    } catch (...) {
      throw AlgebraError("bad number '" + s + "' in congruence map " + spec);
    }
  };
  for (std::size_t i = 0; i < L.size(); ++i) {
    const Partition& p = L[i];
    if (spec == "const:zero") {
      f.values.push_back(Partition::zero(N));
    } else if (spec == "const:one") {
      f.values.push_back(Partition::one(N));
    } else if (spec == "identity") {
      f.values.push_back(p);
    } else if (parts.size() == 2 && (parts[0] == "lcs" || parts[0] == "derived")) {
      std::size_t k = number(parts[1]);
      auto s = engine.series(p, parts[0] == "lcs" ? "lower-central" : "derived", k + 1);
      f.exact = f.exact && s.exact;
      f.values.push_back(s.terms.size() > k ? s.terms[k] : s.terms.back());
    } else if (parts.size() == 3 && parts[0] == "supernil") {
      std::size_t m = number(parts[1]), k = number(parts[2]);
      if (m < 2) throw AlgebraError("supernil map needs m >= 2");
      auto s = engine.series(p, "supernil", k + 1, m);
      f.exact = f.exact && s.exact;
      f.values.push_back(s.terms.size() > k ? s.terms[k] : s.terms.back());
    } else {
      throw AlgebraError("unknown congruence map '" + spec + "'");
    }
  }
  return f;
}

bool is_order_preserving(const CongruenceLattice& L, const CongruenceMap& f) {
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < L.size(); ++j)
      if (L.leq(i, j) && !leq(f.values[i], f.values[j])) return false;
  return true;
}

TermVerdict verify_weak_f_term(CommutatorEngine& engine, const Term& p, const CongruenceMap& f) {
  const auto& A = engine.algebra();
  const auto& L = engine.lattice();
  if (!is_order_preserving(L, f)) throw AlgebraError("congruence map " + f.spec + " is not order-preserving");
  const std::size_t N = A.size();
  FunctionTable P = term_to_table(A, p, 3);
  TermVerdict v;
  for (std::size_t ai = 0; ai < N && v.ok; ++ai)
    for (std::size_t bi = 0; bi < N && v.ok; ++bi) {
      Elem a = static_cast<Elem>(ai), b = static_cast<Elem>(bi);
      Partition ft = f(L, principal_congruence(A, a, b));
      for (auto [x, name] : {std::pair{P({a, b, b}), "p(a,b,b) related to a"}, {P({b, b, a}), "p(b,b,a) related to a"}})
        if (v.ok && !ft.related(x, a)) {
          if (!f.exact) {
            v.exact = false;
            continue;
          }
          v.ok = false;
          v.failed = name;
          v.witness = {a, b};
        }
    }
  return v;
}

TSet generate_T(CommutatorEngine& engine, const Partition& theta, const CongruenceMap& f,
                const std::vector<Partition>& thetas, std::size_t budget) {
  const auto& A = engine.algebra();
  const auto& L = engine.lattice();
  const std::size_t N = A.size(), n = thetas.size();
  if (n == 0) throw AlgebraError("generate_T needs at least one congruence");
  for (const auto& t : thetas)
    if (!leq(t, theta)) throw AlgebraError("each theta_i must lie below theta");
  TSet out;
  Partition ft = f(L, theta);

  // The absorption condition only looks at corner positions, so every
  // candidate g over vectors a_i, b_i is one element of the cube algebra
  // generated inside A^(2^n). Corner 0 is a-bar, the last corner b-bar.
  ClosureOptions co;
  co.cap = budget;
  auto M = generate_subpower(A, std::size_t{1} << n, cube_generators(A, thetas), co);
  if (!M.complete()) {
    out.complete = false;
    out.caps.push_back("clone-cap=" + std::to_string(budget));
  }
  out.candidates = M.size();
  const std::size_t top = (std::size_t{1} << n) - 1;
  std::vector<char> have(N * N, 0);
  for (std::size_t r = 0; r < M.size(); ++r) {
    auto g = M[r];
    Elem ga = g[0], gb = g[top];
    if (gb == ga || have[gb * N + ga]) continue;
    bool absorbs = true;
    for (std::size_t c = 1; c < top && absorbs; ++c) absorbs = ft.related(g[c], ga);
    if (absorbs) {
      have[gb * N + ga] = 1;
      out.pairs.emplace_back(gb, ga);
    }
  }
  out.generated = congruence_closure(A, out.pairs);
  return out;
}

}  // namespace hicomm
