#include "doctest.h"

#include <chrono>

#include "hicomm/commutator.hpp"

using namespace hicomm;

namespace {

Partition mod_blocks(std::size_t n, std::size_t m) {
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = x % m;
  return Partition::from_labels(labels);
}

}  // namespace

TEST_CASE("z8 binary commutators") {
  auto B = builtin_example("z8-bulatov");
  CommutatorEngine e(B);
  const auto one = Partition::one(8), alpha = mod_blocks(8, 2), beta = mod_blocks(8, 4);
  CHECK(e.exact({one, one}).value == alpha);
  CHECK(e.exact({one, alpha}).value == beta);
  CHECK(e.exact({one, beta}).value.is_zero());
  CHECK(e.exact({one, one, one}).value == alpha);
  CHECK(e.exact({one, one, one, one}).value == beta);
  CHECK(e.exact({one, one, one, one, one}).value == beta);
  CHECK(e.exact({one, one, one, one, one, one}).value.is_zero());
}

TEST_CASE("z8 bracket") {
  auto B = builtin_example("z8-bulatov");
  CommutatorEngine e(B);
  const auto one = Partition::one(8), alpha = mod_blocks(8, 2), beta = mod_blocks(8, 4);
  auto r3 = e.bracket(std::vector<Partition>(3, one));
  CHECK(r3.value == alpha);
  CHECK(r3.upper == alpha);
  auto r4 = e.bracket(std::vector<Partition>(4, one));
  CHECK(r4.value == beta);
  CHECK(r4.upper == beta);
}

TEST_CASE("two-element lattice is neutral") {
  auto L = builtin_example("two-lattice");
  CommutatorEngine e(L);
  const auto one = Partition::one(2);
  CHECK(e.exact({one, one}).value == one);
  CHECK(e.exact({one, one, one}).value == one);
}

TEST_CASE("abelian groups") {
  auto G = builtin_example("z4-group");
  CommutatorEngine e(G);
  CHECK(e.exact({Partition::one(4), Partition::one(4)}).value.is_zero());
  auto D = builtin_example("d4-group");
  CommutatorEngine d(D);
  auto r = d.exact({Partition::one(8), Partition::one(8)});
  CHECK(r.value.block_count() == 4);
  CHECK(d.exact({Partition::one(8), Partition::one(8), Partition::one(8)}).value.is_zero());
}
