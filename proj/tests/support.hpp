#pragma once

#include <random>

#include "regop/algebra.hpp"
#include "regop/types.hpp"

namespace regop::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(gen_); }
  bool coin() { return integer(0, 1) == 1; }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = Complex(normal(), normal());
    return m;
  }
  Vector vector(Index n) { return matrix(n, 1).col(0); }

  Matrix hermitian(Index n) {
    const Matrix a = matrix(n, n);
    return 0.5 * (a + a.adjoint());
  }

  Matrix unitary(Index n) {
    Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  /// Orthonormal n x d frame.
  Matrix frame(Index n, Index d) { return unitary(n).leftCols(d); }

  AlgebraElement element(const FiberIndex& index) {
    std::vector<Matrix> f;
    for (Index d : index.dims()) f.push_back(matrix(d, d));
    return AlgebraElement(index, std::move(f));
  }

  FiberIndex index(Index max_points, Index max_dim) {
    const Index points = integer(1, max_points);
    std::vector<std::string> labels;
    std::vector<Index> dims;
    for (Index i = 0; i < points; ++i) {
      labels.push_back("p" + std::to_string(i));
      dims.push_back(integer(1, max_dim));
    }
    return FiberIndex(labels, dims);
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace regop::testing
