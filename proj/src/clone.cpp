#include "hicomm/clone.hpp"

#include <cmath>

namespace hicomm {

namespace {

std::vector<std::vector<Elem>> clone_generators(std::size_t n, std::size_t k, std::vector<Term>* terms) {
  std::vector<std::vector<Elem>> gens;
  for (std::size_t i = 0; i < k; ++i) {
    gens.push_back(FunctionTable::projection(n, k, i).values);
    if (terms) terms->push_back(Term::var(i));
  }
  for (std::size_t c = 0; c < n; ++c) {
    gens.push_back(FunctionTable::constant(n, k, static_cast<Elem>(c)).values);
    if (terms) terms->push_back(Term::constant(static_cast<Elem>(c)));
  }
  return gens;
}

constexpr std::size_t kMaxCloneWidth = std::size_t{1} << 20;

}  // namespace

double PolynomialClone::log2_size() const {
  if (module_) return module_->module.log2_size();
  if (tables_) return std::log2(static_cast<double>(tables_->size()));
  return 0;
}

bool PolynomialClone::contains(const FunctionTable& f) const {
  if (f.arity != arity_ || f.universe != n_) return false;
  if (tables_) return tables_->contains(f.values);
  std::vector<std::uint32_t> ints(f.values.size());
  for (std::size_t j = 0; j < ints.size(); ++j) ints[j] = plan_->to_int[f.values[j]];
  return module_->module.contains(ints);
}

Term PolynomialClone::term(std::size_t index) const {
  if (!tables_ || !tables_->has_provenance()) throw AlgebraError("clone has no provenance");
  return provenance_term(*A_, *tables_, index, generator_terms_);
}

PolynomialClone polynomial_clone(const FiniteAlgebra& A, std::size_t k, const CloneOptions& options) {
  const std::size_t n = A.size();
  const std::size_t width = checked_pow(n, k);
  if (width > kMaxCloneWidth) throw AlgebraError("clone table width " + std::to_string(width) + " too large");
  PolynomialClone pc;
  pc.A_ = &A;
  pc.n_ = n;
  pc.arity_ = k;
  pc.cap_ = options.cap;
  auto gens = clone_generators(n, k, &pc.generator_terms_);
  if (options.allow_module_path) pc.plan_ = detect_module_plan(A);
  if (pc.plan_) {
    pc.module_ = generate_submodule(A, *pc.plan_, width, gens, options.cap, options.max_work);
    pc.complete_ = pc.module_->complete;
  } else {
    ClosureOptions co;
    co.cap = options.cap;
    co.provenance = options.provenance;
    co.max_work = options.max_work;
    pc.tables_ = generate_subpower(A, width, gens, co);
    pc.complete_ = pc.tables_->complete();
  }
  return pc;
}

Term provenance_term(const FiniteAlgebra& A, const Subpower& S, std::size_t i, std::span<const Term> generator_terms) {
  std::vector<Term> memo(i + 1);
  std::vector<char> done(i + 1, 0);
  std::vector<std::size_t> stack{i};
  while (!stack.empty()) {
    std::size_t x = stack.back();
    if (done[x]) {
      stack.pop_back();
      continue;
    }
    const auto& p = S.provenance(x);
    if (p.op < 0) {
      memo[x] = generator_terms[p.args.at(0)];
      done[x] = 1;
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (auto a : p.args)
      if (!done[a]) {
        stack.push_back(a);
        ready = false;
      }
    if (!ready) continue;
    std::vector<Term> kids;
    for (auto a : p.args) kids.push_back(memo[a]);
    memo[x] = Term::apply(A.op(static_cast<std::size_t>(p.op)).symbol, std::move(kids));
    done[x] = 1;
    stack.pop_back();
  }
  return memo[i];
}

bool is_absorbing(const FunctionTable& f, std::span<const Elem> point, Elem value) {
  if (point.size() != f.arity) throw AlgebraError("absorption point arity mismatch");
  std::vector<Elem> t(f.arity, 0);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    index_to_tuple(idx, f.universe, t);
    bool pinned = false;
    for (std::size_t i = 0; i < f.arity && !pinned; ++i) pinned = t[i] == point[i];
    if (pinned && f.values[idx] != value) return false;
  }
  return true;
}

AbsorbingSet enumerate_absorbing(const FiniteAlgebra& A, std::size_t k, Elem zero, const CloneOptions& options) {
  if (k == 0) throw AlgebraError("absorbing polynomials need arity >= 1");
  const std::size_t n = A.size();
  if (zero >= n) throw AlgebraError("zero element out of range");
  const std::size_t width = checked_pow(n, k);
  AbsorbingSet out;
  out.arity = k;
  out.zero = zero;

  std::optional<ModulePlan> plan;
  if (options.allow_module_path) plan = detect_module_plan(A);
  if (plan) {
    // Columns with some coordinate equal to zero come first.
    std::vector<std::size_t> perm;
    std::vector<Elem> t(k);
    std::size_t constrained = 0;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t idx = 0; idx < width; ++idx) {
        index_to_tuple(idx, n, t);
        bool pinned = false;
        for (auto v : t) pinned = pinned || v == zero;
        if (pinned == (pass == 0)) perm.push_back(idx);
        if (pass == 0 && pinned) ++constrained;
      }
    auto gens = clone_generators(n, k, nullptr);
    for (auto& g : gens) {
      std::vector<Elem> p(width);
      for (std::size_t j = 0; j < width; ++j) p[j] = g[perm[j]];
      g = std::move(p);
    }
    auto mc = generate_submodule(A, *plan, width, gens, options.cap, options.max_work);
    const std::uint32_t N = plan->modulus;
    std::vector<const ZnModule::Row*> free_rows;
    std::vector<std::uint32_t> orders;
    out.log2_count = 0;
    for (std::size_t r = 0; r < mc.module.rows().size(); ++r) {
      std::size_t c = mc.module.pivot_column(r);
      if (c < constrained) continue;
      free_rows.push_back(&mc.module.rows()[r]);
      orders.push_back(N / mc.module.rows()[r][c]);
      out.log2_count += std::log2(static_cast<double>(orders.back()));
    }
    out.count_known = mc.complete;
    std::vector<std::uint32_t> coef(free_rows.size(), 0);
    std::vector<std::uint32_t> acc(width);
    bool truncated = false;
    while (true) {
      if (out.members.size() >= options.cap) {
        truncated = true;
        break;
      }
      std::fill(acc.begin(), acc.end(), plan->to_int[zero]);
      for (std::size_t r = 0; r < free_rows.size(); ++r)
        if (coef[r])
          for (std::size_t j = 0; j < width; ++j) acc[j] = (acc[j] + coef[r] * (*free_rows[r])[j]) % N;
      std::vector<Elem> table(width);
      for (std::size_t j = 0; j < width; ++j) table[perm[j]] = plan->from_int[acc[j]];
      out.members.emplace_back(n, k, std::move(table), zero);
      std::size_t r = coef.size();
      while (r-- > 0) {
        if (++coef[r] < orders[r]) break;
        coef[r] = 0;
      }
      if (r == static_cast<std::size_t>(-1)) break;
    }
    out.exhaustive = mc.complete && !truncated;
    return out;
  }

  CloneOptions co = options;
  co.allow_module_path = false;
  co.provenance = true;
  auto pc = polynomial_clone(A, k, co);
  const Subpower& S = *pc.tables();
  std::vector<Elem> point(k, zero);
  for (std::size_t i = 0; i < S.size(); ++i) {
    FunctionTable f(n, k, std::vector<Elem>(S[i].begin(), S[i].end()), zero);
    if (is_absorbing(f, point, zero)) {
      out.members.push_back(std::move(f));
      out.terms.push_back(pc.term(i));
    }
  }
  out.exhaustive = pc.complete();
  out.count_known = out.exhaustive;
  out.log2_count = std::log2(static_cast<double>(out.members.size()));
  return out;
}

}  // namespace hicomm
