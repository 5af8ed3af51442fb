#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace codazzi {

/// Dense rank-r tensor with every index running over the chart dimension n.
/// Used with T = double (point values) and T = Expr (symbolic fields).
template <typename T>
class Tensor {
 public:
  Tensor() : n_(0), rank_(0) {}
  Tensor(int n, int rank) : n_(n), rank_(rank) {
    std::size_t size = 1;
    for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(n);
    v_.assign(size, T{});
  }

  int n() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  T& operator()(int i) { return v_[idx({i})]; }
  T& operator()(int i, int j) { return v_[idx({i, j})]; }
  T& operator()(int i, int j, int k) { return v_[idx({i, j, k})]; }
  T& operator()(int i, int j, int k, int l) { return v_[idx({i, j, k, l})]; }
  T& operator()(int i, int j, int k, int l, int m) { return v_[idx({i, j, k, l, m})]; }

  const T& operator()(int i) const { return v_[idx({i})]; }
  const T& operator()(int i, int j) const { return v_[idx({i, j})]; }
  const T& operator()(int i, int j, int k) const { return v_[idx({i, j, k})]; }
  const T& operator()(int i, int j, int k, int l) const { return v_[idx({i, j, k, l})]; }
  const T& operator()(int i, int j, int k, int l, int m) const {
    return v_[idx({i, j, k, l, m})];
  }

  const std::vector<T>& flat() const { return v_; }
  std::vector<T>& flat() { return v_; }

 private:
  std::size_t idx(std::initializer_list<int> is) const {
    std::size_t p = 0;
    for (int i : is) p = p * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return p;
  }

  int n_;
  int rank_;
  std::vector<T> v_;
};

}  // namespace codazzi
