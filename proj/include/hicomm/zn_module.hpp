#ifndef HICOMM_ZN_MODULE_HPP
#define HICOMM_ZN_MODULE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hicomm/algebra.hpp"

namespace hicomm {

// Submodule of Z_N^width kept in Howell form: rows in echelon order, each
// pivot a divisor of N, entries above a pivot reduced below it, and every
// vector of the span whose first k entries vanish is a combination of the
// rows with pivot column >= k.
class ZnModule {
 public:
  using Row = std::vector<std::uint32_t>;

  ZnModule(std::uint32_t modulus, std::size_t width) : N_(modulus), width_(width) {}

  std::uint32_t modulus() const { return N_; }
  std::size_t width() const { return width_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t pivot_column(std::size_t r) const;

  // Adds v to the generating set; returns true when the span grew.
  bool add(std::span<const std::uint32_t> v);
  bool contains(std::span<const std::uint32_t> v) const;

  // log2 of the number of elements.
  double log2_size() const;

 private:
  void rebuild(std::vector<Row> rows);

  std::uint32_t N_;
  std::size_t width_;
  std::vector<Row> rows_;
};

// A = (Z_N, +) up to relabeling, with every other op multi-affine.
struct ModulePlan {
  std::size_t group_op = 0;
  std::uint32_t modulus = 0;
  std::vector<std::uint32_t> to_int;  // element -> residue
  std::vector<Elem> from_int;         // residue -> element
};

std::optional<ModulePlan> detect_module_plan(const FiniteAlgebra& A);

struct ModuleClosure {
  ZnModule module;
  std::size_t materialized = 0;  // vectors kept as generators
  bool complete = false;
};

// Submodule of A^width generated by the tuples, closed under the basic ops
// (which act affinely); cap bounds the number of materialized generators.
ModuleClosure generate_submodule(const FiniteAlgebra& A, const ModulePlan& plan, std::size_t width,
                                 const std::vector<std::vector<Elem>>& generators, std::size_t cap,
                                 std::size_t max_work = std::size_t{1} << 32);

}  // namespace hicomm

#endif
