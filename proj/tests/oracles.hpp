#pragma once
// Reference computations used only by the tests. None of them goes through
// the SVD-based rank policy of the library.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
inline int exact_rank(IntMatrix a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int rank = 0;
  __int128 prev = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int j = c + 1; j < cols; ++j) {
        const __int128 v = static_cast<__int128>(a[rank][c]) * a[r][j] - static_cast<__int128>(a[r][c]) * a[rank][j];
        a[r][j] = static_cast<std::int64_t>(v / prev);
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

inline Matrix to_double(const IntMatrix& a) {
  Matrix m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a.empty() ? 0 : a[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<double>(a[i][j]);
  return m;
}

/// Product of a random rows x r and r x cols integer pair with small entries.
inline IntMatrix random_low_rank(std::mt19937_64& rng, int rows, int cols, int r) {
  std::uniform_int_distribution<int> u(-3, 3);
  IntMatrix left(rows, std::vector<std::int64_t>(r)), right(r, std::vector<std::int64_t>(cols));
  for (auto& row : left)
    for (auto& x : row) x = u(rng);
  for (auto& row : right)
    for (auto& x : row) x = u(rng);
  IntMatrix out(rows, std::vector<std::int64_t>(cols, 0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int l = 0; l < r; ++l) out[i][j] += left[i][l] * right[l][j];
  return out;
}

/// Norm of the part of x in ker F, for F with full row rank. The kernel is
/// read off a full Householder QR of F^T, so no SVD is involved.
inline double null_space_component(const Matrix& f, const Vector& x) {
  const Eigen::HouseholderQR<Matrix> qr(f.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(f.cols(), f.cols());
  return (q.rightCols(f.cols() - f.rows()).transpose() * x).norm();
}

/// Matrix exponential by a long Taylor series with scaling and squaring.
inline Eigen::Matrix3d taylor_exp(const Eigen::Matrix3d& a) {
  int squarings = 0;
  double norm = a.norm();
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Eigen::Matrix3d s = a / std::pow(2.0, squarings);
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d out = term;
  for (int i = 1; i < 30; ++i) {
    term = term * s / static_cast<double>(i);
    out += term;
  }
  for (int i = 0; i < squarings; ++i) out = out * out;
  return out;
}

/// Central difference of a vector function along a direction.
template <class F>
Vector directional_derivative(F&& f, const Vector& x, const Vector& dir, double h = 1e-6) {
  return (f(x + h * dir) - f(x - h * dir)) / (2.0 * h);
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, int n) { return random_matrix(rng, n, 1); }

}  // namespace oracle
