#ifndef HICOMM_COMMUTATOR_HPP
#define HICOMM_COMMUTATOR_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hicomm/algebra.hpp"
#include "hicomm/clone.hpp"
#include "hicomm/congruence.hpp"
#include "hicomm/partition.hpp"
#include "hicomm/subpower.hpp"
#include "hicomm/term.hpp"
#include "hicomm/zn_module.hpp"

namespace hicomm {

enum class CommutatorMethod { delta_exact, witness_lower_bound, quotient_upper_bound, absorbing_generators };
std::string to_string(CommutatorMethod m);

// Raised when a cap stops a computation that has no fallback.
class IndeterminateError : public AlgebraError {
 public:
  IndeterminateError(const std::string& what, std::string cap) : AlgebraError(what), cap_(std::move(cap)) {}
  const std::string& cap() const { return cap_; }

 private:
  std::string cap_;
};

struct EngineOptions {
  std::size_t delta_cap = std::size_t{1} << 22;
  std::size_t clone_cap = 1'000'000;
  std::size_t lattice_cap = 100000;
  std::size_t max_work = std::size_t{1} << 32;
  std::size_t composite_budget = 20000;  // witness polynomials tried by the bracket
  bool module_path = true;
  bool group_path = true;
  std::size_t threads = 1;
};

// Bit i (1-based, i = 1 most significant) of vertex v in dimension n.
inline std::size_t vertex_bit(std::size_t v, std::size_t n, std::size_t i) { return (v >> (n - i)) & 1u; }

std::vector<std::vector<Elem>> cube_generators(const FiniteAlgebra& A, std::span<const Partition> thetas);

// Delta(theta_1..theta_n): explicit set, or a Z_N module when A is affine
// over a cyclic group.
class CubeSet {
 public:
  std::size_t dimension() const { return dimension_; }
  bool complete() const { return complete_; }
  bool cap_exceeded() const { return !complete_; }
  std::size_t cap() const { return cap_; }
  bool is_module() const { return module_.has_value(); }
  double log2_size() const;
  bool contains(std::span<const Elem> cube) const;

  const Subpower* explicit_set() const { return explicit_ ? &*explicit_ : nullptr; }
  const ModuleClosure* module() const { return module_ ? &*module_ : nullptr; }
  const ModulePlan* plan() const { return plan_ ? &*plan_ : nullptr; }
  std::string path() const;

 private:
  friend CubeSet generate_delta(const FiniteAlgebra&, std::size_t, const std::vector<std::vector<Elem>>&,
                                const EngineOptions&);
  std::size_t dimension_ = 0;
  bool complete_ = false;
  std::size_t cap_ = 0;
  std::optional<Subpower> explicit_;
  std::optional<ModuleClosure> module_;
  std::optional<ModulePlan> plan_;
};

CubeSet generate_delta(const FiniteAlgebra& A, std::size_t dimension, const std::vector<std::vector<Elem>>& generators,
                       const EngineOptions& options = {});

struct CentralizerResult {
  bool holds = true;
  std::optional<std::vector<Elem>> violating_cube;
};

struct Certificate {
  std::string kind;  // "witness", "pivot-cube", "quotient", "note"
  std::string term;
  std::vector<Elem> args;
  std::vector<Elem> cube;
  std::optional<ElemPair> pair;
  std::string detail;
};

struct CommutatorResult {
  std::vector<Partition> inputs;
  Partition value;  // exact value, or the lower bound when !exact
  Partition upper;  // equals value when exact
  CommutatorMethod method = CommutatorMethod::delta_exact;
  CommutatorMethod upper_method = CommutatorMethod::delta_exact;
  bool exact = true;
  std::string path;  // generic | group | module | bracket
  double delta_log2_size = 0;
  std::vector<std::string> caps;
  std::vector<Certificate> certificates;
};

struct SeriesResult {
  std::string kind;
  std::vector<Partition> terms;
  bool stabilized = false;
  bool exact = true;
};

struct SupernilpotenceResult {
  std::optional<std::size_t> klass;
  std::size_t lower_bound = 1;  // A is not k-supernilpotent for k < lower_bound
  std::vector<CommutatorResult> evidence;
};

struct NeutralityResult {
  bool holds = true;
  bool exhaustive = true;
  std::size_t tuples_checked = 0;
  std::vector<Partition> counterexample;
  std::optional<Partition> counterexample_value;
};

struct HcReport {
  struct Entry {
    std::string property;
    std::string status;  // pass | fail | skipped | indeterminate
    std::size_t cases = 0;
    std::string witness;
  };
  std::vector<Entry> entries;
  bool exhaustive = true;
  bool all_pass() const;
};

class CommutatorEngine {
 public:
  explicit CommutatorEngine(const FiniteAlgebra& A, EngineOptions options = {});

  const FiniteAlgebra& algebra() const { return A_; }
  const EngineOptions& options() const { return opt_; }
  const CongruenceLattice& lattice();
  const std::optional<ModulePlan>& module_plan() const { return plan_; }

  // Exact value when caps allow, otherwise the witness/quotient bracket.
  CommutatorResult commutator(std::span<const Partition> thetas);
  CommutatorResult commutator(std::initializer_list<Partition> thetas) {
    return commutator(std::span<const Partition>(thetas.begin(), thetas.size()));
  }
  // Throws IndeterminateError when the exact computation is capped.
  CommutatorResult exact(std::span<const Partition> thetas);
  CommutatorResult exact(std::initializer_list<Partition> thetas) {
    return exact(std::span<const Partition>(thetas.begin(), thetas.size()));
  }
  CommutatorResult bracket(std::span<const Partition> thetas);
  // Cg{(z, f(b)) : f in Ab^n_z, (z, b_i) in theta_i}; needs an exhaustive enumeration.
  CommutatorResult absorbing_route(std::span<const Partition> thetas, Elem zero = 0);

  CentralizerResult centralizes(std::span<const Partition> thetas, const Partition& beta, const Partition& delta);

  const AbsorbingSet& absorbing(std::size_t k, Elem zero);

  SeriesResult series(const Partition& theta, const std::string& kind, std::size_t max_len, std::size_t m = 2);
  SupernilpotenceResult supernilpotence_class(std::size_t max_n);
  NeutralityResult check_neutrality(std::size_t n, std::size_t budget = 100000);
  HcReport check_hc_properties(const std::set<std::string>& props, std::size_t n, std::size_t sample_budget,
                               bool malcev);
  std::vector<Partition> nested_commutator_set(const Partition& theta, std::size_t depth, std::size_t max_arity,
                                               std::size_t budget = 100000);

  std::size_t cache_size() const { return cache_.size(); }

 private:
  CommutatorResult compute_exact(const std::vector<Partition>& thetas);
  Partition lower_from_witnesses(const std::vector<Partition>& thetas, const Partition& stop_at,
                                 std::vector<Certificate>& certs, std::vector<std::string>& caps);

  const FiniteAlgebra& A_;
  EngineOptions opt_;
  std::optional<ModulePlan> plan_;
  std::unique_ptr<CongruenceLattice> lattice_;
  std::map<std::vector<Partition>, CommutatorResult> cache_;
  std::map<std::pair<std::size_t, Elem>, AbsorbingSet> absorbing_cache_;
};

// One-shot wrappers.
CentralizerResult centralizes(const FiniteAlgebra& A, std::span<const Partition> thetas, const Partition& beta,
                              const Partition& delta, const EngineOptions& options = {});
CommutatorResult higher_commutator(const FiniteAlgebra& A, std::span<const Partition> thetas,
                                   const EngineOptions& options = {});

// delta-fixpoint over an explicit cube set.
Partition delta_fixpoint(const FiniteAlgebra& A, const Subpower& cubes, std::size_t dimension);

}  // namespace hicomm

#endif
