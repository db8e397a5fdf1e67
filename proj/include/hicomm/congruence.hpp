#ifndef HICOMM_CONGRUENCE_HPP
#define HICOMM_CONGRUENCE_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hicomm/algebra.hpp"
#include "hicomm/partition.hpp"

namespace hicomm {

// Least congruence containing the pairs (and the optional base partition).
Partition congruence_closure(const FiniteAlgebra& A, std::span<const ElemPair> pairs,
                             const Partition* base = nullptr);
Partition principal_congruence(const FiniteAlgebra& A, Elem a, Elem b);
Partition join(const FiniteAlgebra& A, const Partition& x, const Partition& y);

struct CompatibilityWitness {
  std::size_t op = 0;
  std::vector<Elem> left, right;  // related argument tuples with unrelated images
};
std::optional<CompatibilityWitness> compatibility_violation(const FiniteAlgebra& A, const Partition& p);
inline bool is_congruence(const FiniteAlgebra& A, const Partition& p) { return !compatibility_violation(A, p); }

class LatticeCapExceeded : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class CongruenceLattice {
 public:
  CongruenceLattice() = default;
  explicit CongruenceLattice(std::vector<Partition> sorted_elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<Partition>& elements() const { return elements_; }
  const Partition& operator[](std::size_t i) const { return elements_[i]; }
  bool leq(std::size_t i, std::size_t j) const { return leq_[i * elements_.size() + j]; }
  const std::vector<std::vector<std::size_t>>& covers() const { return covers_; }

  std::optional<std::size_t> index_of(const Partition& p) const;
  std::size_t meet_index(std::size_t i, std::size_t j) const;
  std::size_t join_index(std::size_t i, std::size_t j) const;
  std::size_t bottom() const { return 0; }
  std::size_t top() const { return elements_.size() - 1; }

 private:
  std::vector<Partition> elements_;
  std::vector<char> leq_;
  std::vector<std::vector<std::size_t>> covers_;
  std::unordered_map<Partition, std::size_t> index_;
};

// Canonical order: more blocks first, then lexicographic parent vector.
// Index 0 is 0_A and the last index is 1_A.
CongruenceLattice congruence_lattice(const FiniteAlgebra& A, std::size_t max_size = 100000,
                                     std::size_t threads = 1);

struct Quotient {
  FiniteAlgebra algebra;
  std::vector<Elem> map;  // element of A -> element of A/theta
};
Quotient quotient_algebra(const FiniteAlgebra& A, const Partition& theta);
// Image of a congruence x >= theta in the quotient by theta.
Partition quotient_partition(const Quotient& q, const Partition& x);

struct SdMeetResult {
  bool holds = true;
  std::optional<std::array<std::size_t, 3>> witness;  // lattice indices (x, y, z)
};
SdMeetResult is_meet_semidistributive(const CongruenceLattice& L);

std::string lattice_to_dot(const CongruenceLattice& L, const std::string& name = "Con");

// "zero", "one", "cg:a-b[,c-d...]", "idx:k"; idx needs the lattice.
Partition parse_congruence_spec(const FiniteAlgebra& A, const std::string& spec,
                                const CongruenceLattice* L = nullptr);

}  // namespace hicomm

#endif
