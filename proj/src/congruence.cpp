#include "hicomm/congruence.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hicomm {

Partition congruence_closure(const FiniteAlgebra& A, std::span<const ElemPair> pairs, const Partition* base) {
  const std::size_t n = A.size();
  DisjointSet ds(n);
  std::deque<ElemPair> work;
  auto push = [&](std::size_t a, std::size_t b) {
    if (ds.unite(a, b)) work.emplace_back(static_cast<Elem>(a), static_cast<Elem>(b));
  };
  if (base) {
    if (base->size() != n) throw AlgebraError("partition size mismatch");
    for (auto [a, b] : base->generating_pairs()) push(a, b);
  }
  for (auto [a, b] : pairs) {
    if (a >= n || b >= n) throw AlgebraError("pair element out of range");
    push(a, b);
  }

  // Every merged pair is pushed through all one-variable basic translations.
  std::vector<Elem> frame;
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    for (const auto& op : A.ops()) {
      const std::size_t k = op.arity;
      if (k == 0) continue;
      const std::size_t frames = checked_pow(n, k - 1);
      frame.assign(k - 1, 0);
      for (std::size_t pos = 0; pos < k; ++pos) {
        const std::size_t stride = checked_pow(n, k - 1 - pos);
        for (std::size_t f = 0; f < frames; ++f) {
          // Split frame index f into high part (args before pos) and low part.
          std::size_t hi = f / stride, lo = f % stride;
          std::size_t base_idx = hi * stride * n + lo;
          push(op.table[base_idx + a * stride], op.table[base_idx + b * stride]);
        }
      }
    }
  }
  return Partition::from_disjoint_set(ds);
}

Partition principal_congruence(const FiniteAlgebra& A, Elem a, Elem b) {
  ElemPair p{a, b};
  return congruence_closure(A, std::span<const ElemPair>(&p, 1));
}

Partition join(const FiniteAlgebra& A, const Partition& x, const Partition& y) {
  auto pairs = y.generating_pairs();
  return congruence_closure(A, pairs, &x);
}

std::optional<CompatibilityWitness> compatibility_violation(const FiniteAlgebra& A, const Partition& p) {
  const std::size_t n = A.size();
  if (p.size() != n) throw AlgebraError("partition size mismatch");
  auto gens = p.generating_pairs();
  std::vector<Elem> args;
  for (std::size_t oi = 0; oi < A.ops().size(); ++oi) {
    const auto& op = A.op(oi);
    const std::size_t k = op.arity;
    if (k == 0) continue;
    args.assign(k, 0);
    const std::size_t len = op.table.size();
    for (std::size_t pos = 0; pos < k; ++pos) {
      const std::size_t stride = checked_pow(n, k - 1 - pos);
      for (std::size_t idx = 0; idx < len; ++idx) {
        if ((idx / stride) % n != 0) continue;  // enumerate frames with slot pos = 0
        for (auto [a, b] : gens) {
          Elem u = op.table[idx + a * stride], v = op.table[idx + b * stride];
          if (!p.related(u, v)) {
            CompatibilityWitness w;
            w.op = oi;
            w.left.resize(k);
            index_to_tuple(idx + a * stride, n, w.left);
            w.right = w.left;
            w.right[pos] = b;
            return w;
          }
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

bool canonical_less(const Partition& a, const Partition& b) {
  auto ca = a.block_count(), cb = b.block_count();
  if (ca != cb) return ca > cb;
  return a < b;
}

}  // namespace

CongruenceLattice::CongruenceLattice(std::vector<Partition> elements) : elements_(std::move(elements)) {
  const std::size_t m = elements_.size();
  leq_.assign(m * m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    index_.emplace(elements_[i], i);
    for (std::size_t j = 0; j < m; ++j) leq_[i * m + j] = hicomm::leq(elements_[i], elements_[j]);
  }
  covers_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || !leq(i, j)) continue;
      bool cover = true;
      for (std::size_t z = 0; z < m && cover; ++z)
        if (z != i && z != j && leq(i, z) && leq(z, j)) cover = false;
      if (cover) covers_[i].push_back(j);
    }
}

std::optional<std::size_t> CongruenceLattice::index_of(const Partition& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CongruenceLattice::meet_index(std::size_t i, std::size_t j) const {
  auto idx = index_of(hicomm::meet(elements_[i], elements_[j]));
  if (!idx) throw AlgebraError("lattice not closed under meet");
  return *idx;
}

std::size_t CongruenceLattice::join_index(std::size_t i, std::size_t j) const {
  // Least common upper bound; elements are sorted so that a linear scan finds it.
  std::optional<std::size_t> best;
  for (std::size_t z = 0; z < size(); ++z) {
    if (!leq(i, z) || !leq(j, z)) continue;
    if (!best || leq(z, *best)) best = z;
  }
  return *best;
}

CongruenceLattice congruence_lattice(const FiniteAlgebra& A, std::size_t max_size, std::size_t threads) {
  const std::size_t n = A.size();
  std::vector<ElemPair> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(static_cast<Elem>(a), static_cast<Elem>(b));

  std::vector<Partition> principal(pairs.size());
  threads = std::max<std::size_t>(1, threads);
  if (threads == 1 || pairs.size() < 64) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      principal[i] = principal_congruence(A, pairs[i].first, pairs[i].second);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = t; i < pairs.size(); i += threads)
          principal[i] = principal_congruence(A, pairs[i].first, pairs[i].second);
      }));
    for (auto& j : jobs) j.get();
  }

  std::set<Partition> distinct_principal(principal.begin(), principal.end());
  std::vector<Partition> gens(distinct_principal.begin(), distinct_principal.end());
  std::unordered_set<Partition> seen;
  std::vector<Partition> all;
  std::deque<Partition> queue;
  auto add = [&](Partition p) {
    if (seen.insert(p).second) {
      if (seen.size() > max_size)
        throw LatticeCapExceeded("congruence lattice exceeds cap " + std::to_string(max_size));
      all.push_back(p);
      queue.push_back(std::move(p));
    }
  };
  add(Partition::zero(n));
  for (const auto& g : gens) add(g);
  while (!queue.empty()) {
    Partition x = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      if (leq(g, x)) continue;
      add(join(A, x, g));
    }
  }
  std::sort(all.begin(), all.end(), canonical_less);
  return CongruenceLattice(std::move(all));
}

Quotient quotient_algebra(const FiniteAlgebra& A, const Partition& theta) {
  if (auto w = compatibility_violation(A, theta))
    throw AlgebraError("partition " + theta.to_string() + " is not compatible with op " + A.op(w->op).symbol);
  const std::size_t n = A.size();
  std::vector<Elem> label(n), reps;
  for (std::size_t i = 0; i < n; ++i) {
    if (theta.rep(i) == i) {
      label[i] = static_cast<Elem>(reps.size());
      reps.push_back(static_cast<Elem>(i));
    }
  }
  std::vector<Elem> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = label[theta.rep(i)];
  const std::size_t m = reps.size();
  std::vector<Operation> ops;
  std::vector<Elem> qargs, args;
  for (const auto& op : A.ops()) {
    Operation q{op.symbol, op.arity, std::vector<Elem>(checked_pow(m, op.arity))};
    qargs.assign(op.arity, 0);
    args.resize(op.arity);
    for (std::size_t idx = 0; idx < q.table.size(); ++idx) {
      index_to_tuple(idx, m, qargs);
      for (std::size_t i = 0; i < op.arity; ++i) args[i] = reps[qargs[i]];
      q.table[idx] = map[op.table[tuple_index(args, n)]];
    }
    ops.push_back(std::move(q));
  }
  return Quotient{FiniteAlgebra(A.name() + "/" + theta.to_string(), m, std::move(ops)), std::move(map)};
}

Partition quotient_partition(const Quotient& q, const Partition& x) {
  const std::size_t m = q.algebra.size();
  DisjointSet ds(m);
  for (std::size_t i = 0; i < x.size(); ++i) ds.unite(q.map[i], q.map[x.rep(i)]);
  return Partition::from_disjoint_set(ds);
}

SdMeetResult is_meet_semidistributive(const CongruenceLattice& L) {
  const std::size_t m = L.size();
  std::vector<std::size_t> mt(m * m), jn(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      mt[i * m + j] = L.meet_index(i, j);
      jn[i * m + j] = L.join_index(i, j);
    }
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t z = 0; z < m; ++z) {
        std::size_t xy = mt[x * m + y];
        if (xy != mt[x * m + z]) continue;
        if (mt[x * m + jn[y * m + z]] != xy) return {false, std::array<std::size_t, 3>{x, y, z}};
      }
  return {};
}

std::string lattice_to_dot(const CongruenceLattice& L, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < L.size(); ++i)
    out << "  n" << i << " [label=\"" << L[i].to_string() << "\"];\n";
  for (std::size_t i = 0; i < L.size(); ++i)
    for (auto j : L.covers()[i]) out << "  n" << i << " -> n" << j << ";\n";
  out << "}\n";
  return out.str();
}

Partition parse_congruence_spec(const FiniteAlgebra& A, const std::string& spec, const CongruenceLattice* L) {
  const std::size_t n = A.size();
  if (spec == "zero" || spec == "0") return Partition::zero(n);
  if (spec == "one" || spec == "1") return Partition::one(n);
  if (spec.rfind("cg:", 0) == 0) {
    std::vector<ElemPair> pairs;
    std::string body = spec.substr(3);
    std::replace(body.begin(), body.end(), ';', ',');
    std::replace(body.begin(), body.end(), '+', ',');
    std::stringstream ss(body);
    std::string p;
    while (std::getline(ss, p, ',')) {
      auto dash = p.find('-');
      if (dash == std::string::npos) throw AlgebraError("bad congruence pair '" + p + "'");
      unsigned long a = std::stoul(p.substr(0, dash)), b = std::stoul(p.substr(dash + 1));
      if (a >= n || b >= n) throw AlgebraError("congruence pair out of range");
      pairs.emplace_back(static_cast<Elem>(a), static_cast<Elem>(b));
    }
    return congruence_closure(A, pairs);
  }
  if (spec.rfind("idx:", 0) == 0) {
    if (!L) throw AlgebraError("idx: spec needs the congruence lattice");
    unsigned long k = std::stoul(spec.substr(4));
    if (k >= L->size()) throw AlgebraError("lattice index out of range");
    return (*L)[k];
  }
  throw AlgebraError("unknown congruence spec '" + spec + "'");
}

}  // namespace hicomm
