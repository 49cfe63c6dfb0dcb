#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace percnat {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), std::int32_t{0});
    size_.assign(n, 1);
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::int32_t size_of(std::int32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
};

/// Per-thread visitation marks that reset in O(1) between uses.
class MarkBuffer {
 public:
  void begin(std::size_t n) {
    if (mark_.size() < n) mark_.resize(n, 0);
    if (++gen_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      gen_ = 1;
    }
  }
  bool test(std::size_t i) const { return mark_[i] == gen_; }
  void set(std::size_t i) { mark_[i] = gen_; }
  bool test_and_set(std::size_t i) {
    if (mark_[i] == gen_) return true;
    mark_[i] = gen_;
    return false;
  }

 private:
  std::vector<std::uint32_t> mark_;
  std::uint32_t gen_ = 0;
};

}  // namespace percnat
