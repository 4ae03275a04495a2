#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace sbtk {

// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false when a and b were already in the same set.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  // Attach the set of `child` under the root of `root_of`, keeping that root.
  // Used by elder-rule sweeps where the surviving representative matters.
  void attach(std::size_t child, std::size_t root_of) {
    child = find(child);
    root_of = find(root_of);
    if (child == root_of) return;
    parent_[child] = root_of;
    size_[root_of] += size_[child];
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace sbtk
