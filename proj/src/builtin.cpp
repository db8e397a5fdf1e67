#include <functional>
#include <string>

#include "hicomm/algebra.hpp"

namespace hicomm {

namespace {

Operation make_op(std::string symbol, std::size_t arity, std::size_t n,
                  const std::function<std::size_t(std::span<const Elem>)>& fn) {
  Operation o{std::move(symbol), arity, {}};
  std::size_t len = checked_pow(n, arity);
  o.table.resize(len);
  std::vector<Elem> args(arity, 0);
  for (std::size_t idx = 0; idx < len; ++idx) {
    index_to_tuple(idx, n, args);
    o.table[idx] = static_cast<Elem>(fn(args) % n);
  }
  return o;
}

FiniteAlgebra bulatov(std::string name, std::size_t n) {
  return FiniteAlgebra(std::move(name), n,
                       {make_op("+", 2, n, [](auto a) { return a[0] + a[1]; }),
                        make_op("f", 3, n, [](auto a) { return 2u * a[0] * a[1] * a[2]; })});
}

FiniteAlgebra cyclic_group(std::size_t n) {
  return FiniteAlgebra("z" + std::to_string(n) + "-group", n,
                       {make_op("p", 2, n, [](auto a) { return a[0] + a[1]; }),
                        make_op("inv", 1, n, [n](auto a) { return n - a[0]; })});
}

// Elements r^i s^j encoded as j*m + i, with s r s = r^-1.
FiniteAlgebra dihedral(std::string name, std::size_t m) {
  std::size_t n = 2 * m;
  auto mul = [m](std::size_t x, std::size_t y) {
    std::size_t i = x % m, j = x / m, k = y % m, l = y / m;
    std::size_t r = j == 0 ? (i + k) % m : (i + m - k) % m;
    return ((j + l) % 2) * m + r;
  };
  auto inv = [m](std::size_t x) {
    std::size_t i = x % m, j = x / m;
    return j == 0 ? (m - i) % m : x;
  };
  return FiniteAlgebra(std::move(name), n,
                       {make_op("p", 2, n, [mul](auto a) { return mul(a[0], a[1]); }),
                        make_op("inv", 1, n, [inv](auto a) { return inv(a[0]); })});
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"z8-bulatov", "z4-bulatov", "zN-group", "z2sq-group", "d4-group",
          "s3-group",   "two-lattice", "two-semilattice", "z8-ring", "trivial"};
}

FiniteAlgebra builtin_example(std::string_view name) {
  if (name == "z8-bulatov") return bulatov("z8-bulatov", 8);
  if (name == "z4-bulatov") return bulatov("z4-bulatov", 4);
  if (name == "z2sq-group") {
    return FiniteAlgebra("z2sq-group", 4,
                         {make_op("p", 2, 4, [](auto a) { return a[0] ^ a[1]; }),
                          make_op("inv", 1, 4, [](auto a) { return a[0]; })});
  }
  if (name == "d4-group") return dihedral("d4-group", 4);
  if (name == "s3-group") return dihedral("s3-group", 3);
  if (name == "two-lattice") {
    return FiniteAlgebra("two-lattice", 2,
                         {make_op("meet", 2, 2, [](auto a) { return a[0] & a[1]; }),
                          make_op("join", 2, 2, [](auto a) { return a[0] | a[1]; })});
  }
  if (name == "two-semilattice")
    return FiniteAlgebra("two-semilattice", 2, {make_op("meet", 2, 2, [](auto a) { return a[0] & a[1]; })});
  if (name == "z8-ring") {
    return FiniteAlgebra("z8-ring", 8,
                         {make_op("+", 2, 8, [](auto a) { return a[0] + a[1]; }),
                          make_op("*", 2, 8, [](auto a) { return a[0] * a[1]; }),
                          make_op("-", 1, 8, [](auto a) { return 8u - a[0]; })});
  }
  if (name == "trivial") return FiniteAlgebra("trivial", 1, {make_op("p", 2, 1, [](auto) { return 0u; })});
  // zN-group
  if (name.size() > 7 && name.front() == 'z' && name.substr(name.size() - 6) == "-group") {
    std::string digits(name.substr(1, name.size() - 7));
    bool ok = !digits.empty();
    for (char c : digits) ok = ok && c >= '0' && c <= '9';
    if (ok) {
      std::size_t n = std::stoul(digits);
      if (n >= 1 && n <= kMaxUniverse) return cyclic_group(n);
    }
  }
  throw AlgebraError("unknown builtin algebra '" + std::string(name) + "'");
}

}  // namespace hicomm
