#ifndef HICOMM_ALGEBRA_HPP
#define HICOMM_ALGEBRA_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hicomm {

using Elem = std::uint8_t;

inline constexpr std::size_t kMaxUniverse = 256;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public AlgebraError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : AlgebraError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// n^k, throws AlgebraError when the result does not fit in size_t.
std::size_t checked_pow(std::size_t n, std::size_t k);

// Row-major index of an argument tuple, leftmost argument most significant.
inline std::size_t tuple_index(std::span<const Elem> args, std::size_t n) {
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * n + a;
  return idx;
}

inline void index_to_tuple(std::size_t idx, std::size_t n, std::span<Elem> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<Elem>(idx % n);
    idx /= n;
  }
}

// Advances a tuple in lexicographic order; returns false after the last one.
inline bool next_tuple(std::span<Elem> t, std::size_t n) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (static_cast<std::size_t>(t[i]) + 1 < n) {
      ++t[i];
      return true;
    }
    t[i] = 0;
  }
  return false;
}

struct Operation {
  std::string symbol;
  std::size_t arity = 0;
  std::vector<Elem> table;
};

class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;
  FiniteAlgebra(std::string name, std::size_t size, std::vector<Operation> ops);

  const std::string& name() const { return name_; }
  std::size_t size() const { return size_; }
  const std::vector<Operation>& ops() const { return ops_; }
  const Operation& op(std::size_t i) const { return ops_.at(i); }

  std::optional<std::size_t> find_op(std::string_view symbol) const;
  const Operation& op(std::string_view symbol) const;

  Elem apply(std::size_t op_index, std::span<const Elem> args) const {
    return ops_[op_index].table[tuple_index(args, size_)];
  }

  // Stable content hash over name-independent data (size and tables).
  std::uint64_t content_hash() const;

 private:
  std::string name_;
  std::size_t size_ = 0;
  std::vector<Operation> ops_;
};

// A k-ary function on the universe stored as a flat table.
struct FunctionTable {
  std::size_t universe = 0;
  std::size_t arity = 0;
  std::optional<Elem> zero;
  std::vector<Elem> values;

  FunctionTable() = default;
  FunctionTable(std::size_t n, std::size_t k, std::vector<Elem> table,
                std::optional<Elem> zero_point = std::nullopt);

  static FunctionTable constant(std::size_t n, std::size_t k, Elem c);
  static FunctionTable projection(std::size_t n, std::size_t k, std::size_t i);

  Elem operator()(std::span<const Elem> args) const { return values[tuple_index(args, universe)]; }
  Elem operator()(std::initializer_list<Elem> args) const {
    return (*this)(std::span<const Elem>(args.begin(), args.size()));
  }
  bool is_constant(Elem c) const;

  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.universe == b.universe && a.arity == b.arity && a.values == b.values;
  }
};

FiniteAlgebra parse_algebra(std::string_view text);
std::string serialize_algebra(const FiniteAlgebra& A);

FunctionTable parse_function_table(std::string_view text, std::size_t universe);
std::string serialize_function_table(const FunctionTable& f);

// Builtin catalog. zN-group is spelled with a concrete N, e.g. "z4-group".
FiniteAlgebra builtin_example(std::string_view name);
std::vector<std::string> builtin_names();

// Reads "builtin:NAME" or a path to an algebra file.
FiniteAlgebra load_algebra(const std::string& source);

struct QuasigroupOps {
  std::size_t mult = 0, ldiv = 0, rdiv = 0;
};

// Finds binary ops (mult, ldiv, rdiv) satisfying the quasigroup identities.
// Ops named "*", "\\", "/" are tried first.
std::optional<QuasigroupOps> find_quasigroup_ops(const FiniteAlgebra& A);
bool is_quasigroup(const FiniteAlgebra& A, const QuasigroupOps& q);

}  // namespace hicomm

#endif
