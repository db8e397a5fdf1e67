#ifndef HICOMM_CLONE_HPP
#define HICOMM_CLONE_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hicomm/algebra.hpp"
#include "hicomm/subpower.hpp"
#include "hicomm/term.hpp"
#include "hicomm/zn_module.hpp"

namespace hicomm {

struct CloneOptions {
  std::size_t cap = 1'000'000;  // tables (explicit) or materialized generators (module)
  bool allow_module_path = true;
  bool provenance = false;
  std::size_t max_work = std::size_t{1} << 32;
};

// Pol_k A: the k-ary polynomial tables, generated from projections and all
// constants. Either an explicit table set or, for affine algebras over a
// cyclic group, a Z_N module that is never materialized.
class PolynomialClone {
 public:
  std::size_t arity() const { return arity_; }
  std::size_t universe() const { return n_; }
  bool complete() const { return complete_; }
  bool is_module() const { return module_.has_value(); }
  double log2_size() const;
  std::size_t cap() const { return cap_; }

  const Subpower* tables() const { return tables_ ? &*tables_ : nullptr; }
  const ModuleClosure* module() const { return module_ ? &*module_ : nullptr; }
  const ModulePlan* plan() const { return plan_ ? &*plan_ : nullptr; }

  bool contains(const FunctionTable& f) const;
  // Term for an explicit member (needs provenance).
  Term term(std::size_t index) const;

 private:
  friend PolynomialClone polynomial_clone(const FiniteAlgebra&, std::size_t, const CloneOptions&);
  const FiniteAlgebra* A_ = nullptr;
  std::size_t n_ = 0, arity_ = 0, cap_ = 0;
  bool complete_ = false;
  std::optional<Subpower> tables_;
  std::optional<ModuleClosure> module_;
  std::optional<ModulePlan> plan_;
  std::vector<Term> generator_terms_;
};

PolynomialClone polynomial_clone(const FiniteAlgebra& A, std::size_t k, const CloneOptions& options = {});

// Reconstructs a term for element i of a closure run with provenance.
Term provenance_term(const FiniteAlgebra& A, const Subpower& S, std::size_t i, std::span<const Term> generator_terms);

bool is_absorbing(const FunctionTable& f, std::span<const Elem> point, Elem value);

struct AbsorbingSet {
  std::size_t arity = 0;
  Elem zero = 0;
  std::vector<FunctionTable> members;
  std::vector<Term> terms;  // parallel to members when available
  bool exhaustive = false;
  double log2_count = 0;     // when known
  bool count_known = false;
};

// Ab^k_zero A.
AbsorbingSet enumerate_absorbing(const FiniteAlgebra& A, std::size_t k, Elem zero, const CloneOptions& options = {});

}  // namespace hicomm

#endif
