#ifndef HICOMM_PARTITION_HPP
#define HICOMM_PARTITION_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hicomm/algebra.hpp"

namespace hicomm {

using ElemPair = std::pair<Elem, Elem>;

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);
  std::size_t find(std::size_t x);
  // Merges the classes of x and y; the smaller root wins. Returns true on change.
  bool unite(std::size_t x, std::size_t y);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

// Equivalence relation on 0..n-1 in canonical form: rep(i) is the least
// element of the block of i.
class Partition {
 public:
  Partition() = default;
  static Partition zero(std::size_t n);
  static Partition one(std::size_t n);
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition from_disjoint_set(DisjointSet& ds);
  static Partition from_blocks(std::size_t n, const std::vector<std::vector<Elem>>& blocks);

  std::size_t size() const { return parent_.size(); }
  Elem rep(std::size_t i) const { return parent_[i]; }
  bool related(std::size_t a, std::size_t b) const { return parent_[a] == parent_[b]; }
  const std::vector<Elem>& parent() const { return parent_; }

  std::size_t block_count() const;
  std::vector<std::vector<Elem>> blocks() const;
  // (rep(i), i) for every non-representative i.
  std::vector<ElemPair> generating_pairs() const;
  bool is_zero() const;
  bool is_one() const;

  // "{0,4|1,5|2,6|3,7}" style.
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;

 private:
  std::vector<Elem> parent_;
};

bool leq(const Partition& x, const Partition& y);
Partition meet(const Partition& x, const Partition& y);

}  // namespace hicomm

template <>
struct std::hash<hicomm::Partition> {
  std::size_t operator()(const hicomm::Partition& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : p.parent()) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

#endif
