// Slow reference implementations shared by the unit and acceptance tests.
// Nothing here calls into the engine's closure, lattice, or congruence code.
#ifndef HICOMM_TESTS_NAIVE_ORACLE_HPP
#define HICOMM_TESTS_NAIVE_ORACLE_HPP

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "hicomm/algebra.hpp"
#include "hicomm/partition.hpp"

namespace naive {

using hicomm::Elem;
using hicomm::FiniteAlgebra;
using hicomm::Partition;
using Labels = std::vector<std::size_t>;

inline std::size_t apply(const FiniteAlgebra& A, std::size_t op, const std::vector<Elem>& args) {
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * A.size() + a;
  return A.op(op).table[idx];
}

// Every tuple pair related blockwise maps to related images.
inline bool compatible(const FiniteAlgebra& A, const Labels& lab) {
  const std::size_t n = A.size();
  for (std::size_t o = 0; o < A.ops().size(); ++o) {
    const std::size_t k = A.op(o).arity;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= n;
    std::vector<Elem> x(k), y(k);
    for (std::size_t s = 0; s < total; ++s)
      for (std::size_t t = 0; t < total; ++t) {
        bool related = true;
        for (std::size_t i = 0, a = s, b = t; i < k; ++i, a /= n, b /= n) {
          x[i] = static_cast<Elem>(a % n);
          y[i] = static_cast<Elem>(b % n);
          related = related && lab[x[i]] == lab[y[i]];
        }
        if (related && lab[apply(A, o, x)] != lab[apply(A, o, y)]) return false;
      }
  }
  return true;
}

// All congruences by restricted growth strings.
inline std::vector<Labels> congruences(const FiniteAlgebra& A) {
  const std::size_t n = A.size();
  std::vector<Labels> out;
  Labels lab(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      if (compatible(A, lab)) out.push_back(lab);
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      lab[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n > 0) rec(1, 1);
  return out;
}

inline Labels labels_of(const Partition& p) {
  Labels l(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) l[i] = p.rep(i);
  return l;
}

// Cubes over {0,1}^n; coordinate i of vertex v is bit i, the last coordinate
// is bit n-1.
using Cube = std::vector<Elem>;

inline std::set<Cube> cubes(const FiniteAlgebra& A, const std::vector<Partition>& thetas) {
  const std::size_t n = thetas.size(), W = std::size_t{1} << n, N = A.size();
  std::set<Cube> S;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        if (!thetas[i].related(a, b)) continue;
        Cube c(W);
        for (std::size_t v = 0; v < W; ++v) c[v] = static_cast<Elem>((v >> i) & 1 ? b : a);
        S.insert(c);
      }
  // Full rounds until nothing new. Operations of arity >= 2 go through
  // sections: fixing all arguments but the last gives a coordinatewise unary
  // map, and equal maps only need to be applied once.
  while (true) {
    std::vector<Cube> cur(S.begin(), S.end());
    std::set<Cube> fresh;
    for (std::size_t o = 0; o < A.ops().size(); ++o) {
      const std::size_t k = A.op(o).arity;
      if (k == 0) {
        fresh.insert(Cube(W, A.op(o).table[0]));
        continue;
      }
      std::set<std::vector<Elem>> sections;
      std::vector<std::size_t> pick(k - 1, 0);
      std::vector<Elem> args(k);
      while (true) {
        std::vector<Elem> sec(W * N);
        for (std::size_t v = 0; v < W; ++v)
          for (std::size_t x = 0; x < N; ++x) {
            for (std::size_t i = 0; i + 1 < k; ++i) args[i] = cur[pick[i]][v];
            args[k - 1] = static_cast<Elem>(x);
            sec[v * N + x] = static_cast<Elem>(apply(A, o, args));
          }
        sections.insert(std::move(sec));
        std::size_t s = k - 1;
        while (s-- > 0) {
          if (++pick[s] < cur.size()) break;
          pick[s] = 0;
        }
        if (s == static_cast<std::size_t>(-1)) break;
      }
      for (const auto& sec : sections)
        for (const auto& c : cur) {
          Cube r(W);
          for (std::size_t v = 0; v < W; ++v) r[v] = sec[v * N + c[v]];
          if (!S.count(r)) fresh.insert(std::move(r));
        }
    }
    if (fresh.empty()) return S;
    S.insert(fresh.begin(), fresh.end());
  }
}

// theta_1..theta_{n-1} centralize theta_n modulo delta on the cube set.
inline bool term_condition(const std::set<Cube>& S, std::size_t n, const Labels& delta) {
  const std::size_t last = std::size_t{1} << (n - 1);
  const std::size_t top = last - 1;
  for (const auto& c : S) {
    bool premise = true;
    for (std::size_t v = 0; v < top && premise; ++v) premise = delta[c[v]] == delta[c[v | last]];
    if (premise && delta[c[top]] != delta[c[top | last]]) return false;
  }
  return true;
}

// Least congruence delta with the term condition, found by brute force over
// all congruences.
inline Partition commutator(const FiniteAlgebra& A, const std::vector<Partition>& thetas) {
  auto S = cubes(A, thetas);
  const std::size_t N = A.size();
  std::vector<Labels> good;
  for (const auto& d : congruences(A))
    if (term_condition(S, thetas.size(), d)) good.push_back(d);
  std::vector<std::size_t> least;
  for (const auto& d : good) {
    bool below_all = true;
    for (const auto& e : good)
      for (std::size_t a = 0; a < N && below_all; ++a)
        for (std::size_t b = 0; b < N && below_all; ++b)
          if (d[a] == d[b] && e[a] != e[b]) below_all = false;
    if (below_all) return Partition::from_labels(d);
  }
  throw hicomm::AlgebraError("no least centralizing congruence");
}

}  // namespace naive

#endif
