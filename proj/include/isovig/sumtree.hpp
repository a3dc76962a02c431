#pragma once

// Complete binary tree over per-leaf weights supporting O(log n) updates and
// O(log n) sampling of a leaf with probability proportional to its weight.
// Each internal node is recomputed from its children on update, so the total
// never accumulates drift beyond the rounding of a single pairwise sum.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace isovig {

class SumTree {
 public:
  explicit SumTree(std::size_t n) : n_(n) {
    cap_ = 1;
    while (cap_ < n_) cap_ <<= 1;
    if (cap_ == 0) cap_ = 1;
    node_.assign(2 * cap_, 0.0);
  }

  std::size_t size() const { return n_; }

  double get(std::size_t i) const { return node_[cap_ + i]; }

  double total() const { return node_[1]; }

  void set(std::size_t i, double w) {
    std::size_t k = cap_ + i;
    node_[k] = w;
    for (k >>= 1; k >= 1; k >>= 1) {
      node_[k] = node_[2 * k] + node_[2 * k + 1];
      if (k == 1) break;
    }
  }

  // Returns the leaf index such that the prefix sum first exceeds `target`.
  // `target` must lie in [0, total()).
  std::size_t sample(double target) const {
    if (!(total() > 0.0)) throw std::logic_error("SumTree::sample on empty tree");
    std::size_t k = 1;
    while (k < cap_) {
      const double left = node_[2 * k];
      if (target < left) {
        k = 2 * k;
      } else {
        target -= left;
        k = 2 * k + 1;
      }
    }
    std::size_t leaf = k - cap_;
    // Guard against rounding in the final comparison: never land on an empty
    // leaf or past the end.
    if (leaf >= n_ || node_[k] <= 0.0) {
      while (leaf > 0 && (leaf >= n_ || node_[cap_ + leaf] <= 0.0)) --leaf;
    }
    return leaf;
  }

 private:
  std::size_t n_;
  std::size_t cap_;
  std::vector<double> node_;
};

}  // namespace isovig
