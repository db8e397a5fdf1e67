#ifndef HICOMM_SUBPOWER_HPP
#define HICOMM_SUBPOWER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hicomm/algebra.hpp"

namespace hicomm {

// Hash set of fixed-width tuples over 0..radix-1, stored contiguously.
// Tuples are packed into a mixed-radix 64-bit code when radix^width fits;
// when radix^width <= 2^26 a direct bit table short-circuits duplicates.
template <class T>
class BasicTupleStore {
 public:
  BasicTupleStore(std::size_t radix, std::size_t width) : n_(radix), width_(width) {
    unsigned __int128 total = 1;
    packed_ = true;
    for (std::size_t i = 0; i < width_; ++i) {
      total *= n_;
      if (total > UINT64_MAX) {
        packed_ = false;
        break;
      }
    }
    direct_ = packed_ && total <= (unsigned __int128)(1) << 26;
    if (direct_) bits_.assign(static_cast<std::size_t>((total + 63) / 64), 0);
    slots_.assign(16, 0);
    mask_ = 15;
  }

  std::size_t width() const { return width_; }
  std::size_t radix() const { return n_; }
  std::size_t size() const { return count_; }
  std::span<const T> operator[](std::size_t i) const { return {data_.data() + i * width_, width_}; }
  bool packed() const { return packed_; }
  bool direct() const { return direct_; }

  std::uint64_t code(std::span<const T> t) const {
    std::uint64_t c = 0;
    for (T v : t) c = c * n_ + v;
    return c;
  }

  // Returns true if t was not present.
  bool insert(std::span<const T> t) {
    std::uint64_t c = packed_ ? code(t) : 0;
    if (direct_ && (bits_[c >> 6] >> (c & 63) & 1)) return false;
    std::uint64_t h = hash_of(t, c);
    std::size_t pos = h & mask_;
    while (slots_[pos] != 0) {
      if (equal_at(slots_[pos] - 1, t, c)) return false;
      pos = (pos + 1) & mask_;
    }
    slots_[pos] = static_cast<std::uint32_t>(count_ + 1);
    data_.insert(data_.end(), t.begin(), t.end());
    if (packed_) codes_.push_back(c);
    if (direct_) bits_[c >> 6] |= std::uint64_t{1} << (c & 63);
    ++count_;
    if (2 * count_ > mask_) grow();
    return true;
  }

  std::optional<std::size_t> find(std::span<const T> t) const {
    if (t.size() != width_) return std::nullopt;
    std::uint64_t c = packed_ ? code(t) : 0;
    if (direct_ && !(bits_[c >> 6] >> (c & 63) & 1)) return std::nullopt;
    std::size_t pos = hash_of(t, c) & mask_;
    while (slots_[pos] != 0) {
      if (equal_at(slots_[pos] - 1, t, c)) return slots_[pos] - 1;
      pos = (pos + 1) & mask_;
    }
    return std::nullopt;
  }
  bool contains(std::span<const T> t) const { return find(t).has_value(); }

 private:
  std::uint64_t hash_of(std::span<const T> t, std::uint64_t c) const {
    if (packed_) {
      std::uint64_t z = c + 0x9e3779b97f4a7c15ull;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    }
    std::uint64_t h = 1469598103934665603ull;
    for (T v : t) h = (h ^ v) * 1099511628211ull;
    return h ^ (h >> 29);
  }
  bool equal_at(std::size_t idx, std::span<const T> t, std::uint64_t c) const {
    if (packed_) return codes_[idx] == c;
    return std::equal(t.begin(), t.end(), data_.begin() + idx * width_);
  }
  void grow() {
    std::size_t cap = (mask_ + 1) * 2;
    slots_.assign(cap, 0);
    mask_ = cap - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      auto t = (*this)[i];
      std::size_t pos = hash_of(t, packed_ ? codes_[i] : 0) & mask_;
      while (slots_[pos] != 0) pos = (pos + 1) & mask_;
      slots_[pos] = static_cast<std::uint32_t>(i + 1);
    }
  }

  std::size_t n_, width_;
  bool packed_ = false, direct_ = false;
  std::size_t count_ = 0;
  std::vector<T> data_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
};

using TupleStore = BasicTupleStore<Elem>;

struct ClosureOptions {
  std::size_t cap = std::size_t{1} << 22;
  bool provenance = false;
  bool allow_group_path = true;
  // Closure stops as soon as a new element satisfies this predicate.
  std::function<bool(std::span<const Elem>)> stop_when;
  // Bound on op applications; exceeding it is reported like the element cap.
  std::size_t max_work = std::size_t{1} << 32;
};

struct Provenance {
  int op = -1;  // -1: generator
  std::vector<std::uint32_t> args;
};

class Subpower {
 public:
  Subpower(std::size_t universe, std::size_t width) : store_(universe, width) {}

  std::size_t width() const { return store_.width(); }
  std::size_t size() const { return store_.size(); }
  std::span<const Elem> operator[](std::size_t i) const { return store_[i]; }
  bool contains(std::span<const Elem> t) const { return store_.contains(t); }
  std::optional<std::size_t> find(std::span<const Elem> t) const { return store_.find(t); }

  bool complete() const { return complete_; }
  bool cap_exceeded() const { return cap_exceeded_; }
  bool work_exceeded() const { return work_exceeded_; }
  bool stopped() const { return stopped_.has_value(); }
  std::optional<std::size_t> stop_index() const { return stopped_; }
  std::size_t cap() const { return cap_; }
  bool used_group_path() const { return group_op_.has_value(); }
  bool packed() const { return store_.packed(); }

  bool has_provenance() const { return !prov_.empty(); }
  const Provenance& provenance(std::size_t i) const { return prov_.at(i); }

 private:
  friend class ClosureRun;
  TupleStore store_;
  std::vector<Provenance> prov_;
  bool complete_ = false;
  bool cap_exceeded_ = false;
  bool work_exceeded_ = false;
  std::optional<std::size_t> stopped_;
  std::size_t cap_ = 0;
  std::optional<std::size_t> group_op_;
};

// Subalgebra of A^width generated by the given tuples, closed under every
// basic op coordinatewise.
Subpower generate_subpower(const FiniteAlgebra& A, std::size_t width,
                           const std::vector<std::vector<Elem>>& generators, const ClosureOptions& options = {});

// Index of a binary op that is a group operation, if any.
std::optional<std::size_t> find_group_op(const FiniteAlgebra& A);

}  // namespace hicomm

#endif
