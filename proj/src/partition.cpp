#include "hicomm/partition.hpp"

#include <map>

namespace hicomm {

DisjointSet::DisjointSet(std::size_t n) : parent_(n) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
}

std::size_t DisjointSet::find(std::size_t x) {
  std::size_t r = x;
  while (parent_[r] != r) r = parent_[r];
  while (parent_[x] != r) {
    std::size_t next = parent_[x];
    parent_[x] = r;
    x = next;
  }
  return r;
}

bool DisjointSet::unite(std::size_t x, std::size_t y) {
  std::size_t a = find(x), b = find(y);
  if (a == b) return false;
  if (a < b)
    parent_[b] = a;
  else
    parent_[a] = b;
  return true;
}

Partition Partition::zero(std::size_t n) {
  Partition p;
  p.parent_.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.parent_[i] = static_cast<Elem>(i);
  return p;
}

Partition Partition::one(std::size_t n) {
  Partition p;
  p.parent_.assign(n, 0);
  return p;
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  Partition p;
  p.parent_.resize(labels.size());
  std::map<std::size_t, Elem> first;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = first.emplace(labels[i], static_cast<Elem>(i));
    p.parent_[i] = it->second;
  }
  return p;
}

Partition Partition::from_disjoint_set(DisjointSet& ds) {
  Partition p;
  p.parent_.resize(ds.size());
  // Roots are block minima because unite keeps the smaller root.
  for (std::size_t i = 0; i < ds.size(); ++i) p.parent_[i] = static_cast<Elem>(ds.find(i));
  return p;
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<Elem>>& blocks) {
  DisjointSet ds(n);
  for (const auto& b : blocks)
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[0] >= n || b[i] >= n) throw AlgebraError("block element out of range");
      ds.unite(b[0], b[i]);
    }
  return from_disjoint_set(ds);
}

std::size_t Partition::block_count() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < parent_.size(); ++i) c += parent_[i] == i;
  return c;
}

std::vector<std::vector<Elem>> Partition::blocks() const {
  std::vector<std::vector<Elem>> out;
  std::vector<std::size_t> slot(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (parent_[i] == i) {
      slot[i] = out.size();
      out.emplace_back();
    }
    out[slot[parent_[i]]].push_back(static_cast<Elem>(i));
  }
  return out;
}

std::vector<ElemPair> Partition::generating_pairs() const {
  std::vector<ElemPair> out;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (parent_[i] != i) out.emplace_back(parent_[i], static_cast<Elem>(i));
  return out;
}

bool Partition::is_zero() const { return block_count() == parent_.size(); }
bool Partition::is_one() const { return block_count() <= 1; }

std::string Partition::to_string() const {
  std::string s = "{";
  bool first_block = true;
  for (const auto& b : blocks()) {
    if (!first_block) s += "|";
    first_block = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(b[i]);
    }
  }
  return s + "}";
}

bool leq(const Partition& x, const Partition& y) {
  if (x.size() != y.size()) throw AlgebraError("partition size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y.rep(i) != y.rep(x.rep(i))) return false;
  return true;
}

Partition meet(const Partition& x, const Partition& y) {
  if (x.size() != y.size()) throw AlgebraError("partition size mismatch");
  std::vector<std::size_t> labels(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) labels[i] = static_cast<std::size_t>(x.rep(i)) * 256 + y.rep(i);
  return Partition::from_labels(labels);
}

}  // namespace hicomm
