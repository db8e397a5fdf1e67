#include "hicomm/zn_module.hpp"

#include <cmath>
#include <numeric>

#include "hicomm/subpower.hpp"

namespace hicomm {

namespace {

struct Gcdex {
  std::int64_t g, s, t;
};

Gcdex gcdex(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  return {old_r, old_s, old_t};
}

std::uint32_t mod(std::int64_t x, std::uint32_t N) {
  std::int64_t r = x % static_cast<std::int64_t>(N);
  return static_cast<std::uint32_t>(r < 0 ? r + N : r);
}

}  // namespace

std::size_t ZnModule::pivot_column(std::size_t r) const {
  const auto& row = rows_[r];
  for (std::size_t c = 0; c < width_; ++c)
    if (row[c] != 0) return c;
  return width_;
}

bool ZnModule::contains(std::span<const std::uint32_t> v) const {
  Row w(v.begin(), v.end());
  for (const auto& row : rows_) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    std::uint32_t p = row[c];
    if (w[c] % p != 0) return false;
    std::uint32_t q = w[c] / p;
    if (q == 0) continue;
    for (std::size_t j = c; j < width_; ++j) w[j] = mod(static_cast<std::int64_t>(w[j]) - std::int64_t{q} * row[j], N_);
  }
  for (auto x : w)
    if (x != 0) return false;
  return true;
}

bool ZnModule::add(std::span<const std::uint32_t> v) {
  if (v.size() != width_) throw AlgebraError("module vector width mismatch");
  if (contains(v)) return false;
  std::vector<Row> pool = rows_;
  pool.emplace_back(v.begin(), v.end());
  rebuild(std::move(pool));
  return true;
}

void ZnModule::rebuild(std::vector<Row> R) {
  const std::uint32_t N = N_;
  auto axpy = [N](Row& dst, const Row& a, std::int64_t ca, const Row& b, std::int64_t cb, std::size_t from) {
    for (std::size_t j = from; j < dst.size(); ++j) dst[j] = mod(ca * a[j] + cb * b[j], N);
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < width_ && r < R.size(); ++c) {
    for (std::size_t i = r + 1; i < R.size(); ++i) {
      std::int64_t b = R[i][c];
      if (b == 0) continue;
      std::int64_t a = R[r][c];
      if (a == 0) {
        std::swap(R[r], R[i]);
        continue;
      }
      auto [g, s, t] = gcdex(a, b);
      Row top(width_), bottom(width_);
      axpy(top, R[r], s, R[i], t, c);
      axpy(bottom, R[r], -(b / g), R[i], a / g, c);
      R[r] = std::move(top);
      R[i] = std::move(bottom);
    }
    std::uint32_t a = R[r][c];
    if (a == 0) continue;
    std::uint32_t g = std::gcd(a, N);
    if (a != g) {
      std::uint32_t unit = 1;
      for (std::uint32_t u = 1; u < N; ++u)
        if (std::gcd(u, N) == 1 && (std::uint64_t{u} * a) % N == g) {
          unit = u;
          break;
        }
      for (std::size_t j = c; j < width_; ++j) R[r][j] = static_cast<std::uint32_t>((std::uint64_t{unit} * R[r][j]) % N);
    }
    for (std::size_t i = 0; i < r; ++i) {
      std::uint32_t q = R[i][c] / g;
      if (q) axpy(R[i], R[i], 1, R[r], -static_cast<std::int64_t>(q), c);
    }
    Row ann(width_, 0);
    bool nonzero = false;
    for (std::size_t j = c; j < width_; ++j) {
      ann[j] = static_cast<std::uint32_t>((std::uint64_t{N / g} * R[r][j]) % N);
      nonzero = nonzero || ann[j] != 0;
    }
    if (nonzero) R.push_back(std::move(ann));
    ++r;
  }
  R.resize(std::min(r, R.size()));
  rows_ = std::move(R);
}

double ZnModule::log2_size() const {
  double s = 0;
  for (const auto& row : rows_) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    s += std::log2(static_cast<double>(N_) / row[c]);
  }
  return s;
}

std::optional<ModulePlan> detect_module_plan(const FiniteAlgebra& A) {
  const std::size_t n = A.size();
  if (n < 2) return std::nullopt;
  auto g = find_group_op(A);
  if (!g) return std::nullopt;
  const auto& mul = A.op(*g).table;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (mul[x * n + y] != mul[y * n + x]) return std::nullopt;
  Elem e = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (mul[c * n + c] == c) e = static_cast<Elem>(c);
  // Look for an element of order n.
  std::optional<ModulePlan> plan;
  for (std::size_t gen = 0; gen < n && !plan; ++gen) {
    std::vector<Elem> powers{e};
    while (powers.size() <= n) {
      Elem next = mul[powers.back() * n + gen];
      if (next == e) break;
      powers.push_back(next);
    }
    if (powers.size() != n) continue;
    ModulePlan p;
    p.group_op = *g;
    p.modulus = static_cast<std::uint32_t>(n);
    p.from_int = powers;
    p.to_int.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) p.to_int[powers[k]] = static_cast<std::uint32_t>(k);
    plan = std::move(p);
  }
  if (!plan) return std::nullopt;
  const auto& to = plan->to_int;
  const std::uint32_t N = plan->modulus;
  std::vector<Elem> args, alt;
  for (std::size_t oi = 0; oi < A.ops().size(); ++oi) {
    if (oi == *g) continue;
    const auto& op = A.op(oi);
    const std::size_t k = op.arity;
    if (k == 0) continue;
    args.assign(k, 0);
    for (std::size_t idx = 0; idx < op.table.size(); ++idx) {
      index_to_tuple(idx, n, args);
      for (std::size_t pos = 0; pos < k; ++pos) {
        alt = args;
        alt[pos] = e;
        std::uint32_t at_zero = to[op.table[tuple_index(alt, n)]];
        std::uint32_t at_x = to[op.table[idx]];
        for (std::size_t y = 0; y < n; ++y) {
          alt[pos] = static_cast<Elem>(y);
          std::uint32_t at_y = to[op.table[tuple_index(alt, n)]];
          alt[pos] = mul[args[pos] * n + y];
          std::uint32_t at_sum = to[op.table[tuple_index(alt, n)]];
          if ((at_sum + at_zero) % N != (at_x + at_y) % N) return std::nullopt;
        }
      }
    }
  }
  return plan;
}

namespace {

bool is_symmetric(const Operation& op, std::size_t n) {
  if (op.arity < 2) return false;
  std::vector<Elem> args(op.arity, 0), swapped;
  for (std::size_t idx = 0; idx < op.table.size(); ++idx) {
    index_to_tuple(idx, n, args);
    for (std::size_t i = 0; i + 1 < op.arity; ++i) {
      swapped = args;
      std::swap(swapped[i], swapped[i + 1]);
      if (op.table[tuple_index(swapped, n)] != op.table[idx]) return false;
    }
  }
  return true;
}

}  // namespace

ModuleClosure generate_submodule(const FiniteAlgebra& A, const ModulePlan& plan, std::size_t width,
                                 const std::vector<std::vector<Elem>>& generators, std::size_t cap,
                                 std::size_t max_work) {
  const std::size_t n = A.size();
  ModuleClosure out{ZnModule(plan.modulus, width), 0, false};
  std::vector<std::vector<Elem>> L;  // materialized generators, element form
  std::vector<std::uint32_t> ints(width);
  // Vectors already known to lie in the module.
  const std::size_t cache_limit = std::max<std::size_t>(1024, (std::size_t{64} << 20) / std::max<std::size_t>(1, width));
  TupleStore known(n, width);
  std::size_t work = 0;

  struct Stop {};
  auto offer = [&](const std::vector<Elem>& v) {
    if (++work > max_work) throw Stop{};
    if (known.contains(v)) return;
    for (std::size_t j = 0; j < width; ++j) ints[j] = plan.to_int[v[j]];
    if (out.module.add(ints)) {
      if (L.size() >= cap) throw Stop{};
      L.push_back(v);
    }
    if (known.size() < cache_limit) known.insert(v);
  };

  std::vector<std::size_t> other_ops;
  std::vector<char> symmetric(A.ops().size(), 0);
  for (std::size_t oi = 0; oi < A.ops().size(); ++oi) {
    if (oi == plan.group_op) continue;
    other_ops.push_back(oi);
    symmetric[oi] = is_symmetric(A.op(oi), n);
  }

  try {
    std::vector<Elem> buf(width);
    for (auto oi : other_ops)
      if (A.op(oi).arity == 0) {
        std::fill(buf.begin(), buf.end(), A.op(oi).table[0]);
        offer(buf);
      }
    for (const auto& g : generators) {
      if (g.size() != width) throw AlgebraError("generator width mismatch");
      offer(g);
    }
    const std::vector<Elem> zero(width, plan.from_int[0]);
    std::size_t old = 0;
    while (true) {
      const std::size_t end = L.size();
      if (old == end) break;
      for (auto oi : other_ops) {
        const auto& op = A.op(oi);
        const std::size_t k = op.arity;
        if (k == 0) continue;
        // Arguments range over {zero} + L[0..end); slot value 0 is zero and
        // value i+1 is L[i]. At least one slot must be a frontier vector.
        std::vector<std::size_t> idx(k, 0);
        auto vec = [&](std::size_t s) -> const std::vector<Elem>& { return s == 0 ? zero : L[s - 1]; };
        std::vector<const std::vector<Elem>*> argv(k);
        while (true) {
          bool touches = false, sorted = true;
          for (std::size_t s = 0; s < k; ++s) {
            touches = touches || (idx[s] >= old + 1);
            if (s && idx[s] < idx[s - 1]) sorted = false;
          }
          if (touches && (!symmetric[oi] || sorted)) {
            for (std::size_t s = 0; s < k; ++s) argv[s] = &vec(idx[s]);
            for (std::size_t j = 0; j < width; ++j) {
              std::size_t code = 0;
              for (std::size_t s = 0; s < k; ++s) code = code * n + (*argv[s])[j];
              buf[j] = op.table[code];
            }
            offer(buf);
          }
          std::size_t s = k;
          while (s-- > 0) {
            if (++idx[s] <= end) break;
            idx[s] = 0;
          }
          if (s == static_cast<std::size_t>(-1)) break;
        }
      }
      old = end;
    }
    out.complete = true;
  } catch (const Stop&) {
    out.complete = false;
  }
  out.materialized = L.size();
  return out;
}

}  // namespace hicomm
