#pragma once

// Determinants of upper Hessenberg matrices by the leading-minor recursion
//
//   det(H_k) = m_{k,k} det(H_{k-1})
//            + sum_{r<k} (-1)^{k-r} m_{r,k} det(H_{r-1}) prod_{j=r}^{k-1} m_{j+1,j},
//
// with det(H_0) = 1 and H_k the leading k x k principal submatrix. O(n^2)
// operations and O(n) storage when entries are produced on demand.

#include <cstddef>
#include <vector>

#include "gof/error.hpp"

namespace gof {

template <class Real>
bool is_zero_value(const Real& x) {
  return x == Real(0);
}

// Dense row-major square matrix.
template <class Real>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, Real(0)) {}
  SquareMatrix(std::initializer_list<std::initializer_list<Real>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw InputError("SquareMatrix: rows must all have length n");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t size() const { return n_; }
  // 1-based access, matching the m_{i,j} indexing of the recursion.
  Real& operator()(std::size_t i, std::size_t j) { return data_[(i - 1) * n_ + (j - 1)]; }
  const Real& operator()(std::size_t i, std::size_t j) const {
    return data_[(i - 1) * n_ + (j - 1)];
  }

 private:
  std::size_t n_ = 0;
  std::vector<Real> data_;
};

// `entry(i, j)` must return m_{i,j} (1-based) for j >= i - 1. Entries below
// the subdiagonal are never requested.
template <class Real, class Entry>
Real hessenberg_det_by_entry(std::size_t n, Entry&& entry) {
  std::vector<Real> minors;
  minors.reserve(n + 1);
  minors.emplace_back(1);
  for (std::size_t k = 1; k <= n; ++k) {
    Real acc = entry(k, k) * minors[k - 1];
    Real chain(1);  // prod_{j=r}^{k-1} m_{j+1,j}
    bool negative = false;
    for (std::size_t r = k - 1; r >= 1; --r) {
      chain *= entry(r + 1, r);
      negative = !negative;
      if (is_zero_value(chain)) break;  // every smaller r carries this factor too
      Real term = entry(r, k) * minors[r - 1] * chain;
      if (negative) {
        acc -= term;
      } else {
        acc += term;
      }
    }
    minors.push_back(std::move(acc));
  }
  return minors[n];
}

template <class Real>
Real hessenberg_det(const SquareMatrix<Real>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw InputError("hessenberg_det: empty matrix");
  for (std::size_t i = 3; i <= n; ++i) {
    for (std::size_t j = 1; j + 1 < i; ++j) {
      if (m(i, j) != Real(0)) {
        throw InputError("hessenberg_det: matrix is not upper Hessenberg");
      }
    }
  }
  return hessenberg_det_by_entry<Real>(n, [&m](std::size_t i, std::size_t j) { return m(i, j); });
}

}  // namespace gof
