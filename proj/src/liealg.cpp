#include "polyred/liealg.hpp"

#include <cmath>

namespace polyred {

namespace {

void check_metric(const Matrix& m, int d) {
  require_dims(m.rows() == d && m.cols() == d, "metric must be d x d");
  if (!m.allFinite()) throw InputError("metric: non-finite entries");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("metric is not symmetric");
  if (d > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) throw InputError("metric is not positive definite");
  }
}

}  // namespace

LieAlgebraData::LieAlgebraData(int d, std::vector<double> constants, std::optional<Matrix> metric)
    : d_(d), c_(std::move(constants)), metric_(std::move(metric)) {
  if (d < 0) throw DimensionError("negative algebra dimension");
  require_dims(c_.size() == static_cast<std::size_t>(d) * d * d, "structure constants must have d^3 entries");
  for (double v : c_) {
    if (!std::isfinite(v)) throw InputError("structure constants: non-finite entries");
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < d; ++e)
        if (std::abs(c(a, b, e) + c(b, a, e)) > 1e-12) throw InputError("structure constants are not antisymmetric");
  if (jacobi_residual() > 1e-12) throw InputError("structure constants violate the Jacobi identity");
  if (metric_) check_metric(*metric_, d);
}

LieAlgebraData LieAlgebraData::so3(std::optional<Matrix> metric) {
  std::vector<double> c(27, 0.0);
  auto set = [&c](int a, int b, int e, double v) { c[static_cast<std::size_t>((a * 3 + b) * 3 + e)] = v; };
  set(0, 1, 2, 1.0);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  set(1, 0, 2, -1.0);
  set(2, 1, 0, -1.0);
  set(0, 2, 1, -1.0);
  return LieAlgebraData(3, std::move(c), std::move(metric));
}

LieAlgebraData LieAlgebraData::abelian(int d, std::optional<Matrix> metric) {
  return LieAlgebraData(d, std::vector<double>(static_cast<std::size_t>(d) * d * d, 0.0), std::move(metric));
}

LieAlgebraData LieAlgebraData::with_metric(Matrix metric) const {
  LieAlgebraData out = *this;
  check_metric(metric, d_);
  out.metric_ = std::move(metric);
  return out;
}

double LieAlgebraData::jacobi_residual() const {
  double worst = 0.0;
  for (int a = 0; a < d_; ++a) {
    for (int b = 0; b < d_; ++b) {
      for (int e = 0; e < d_; ++e) {
        // [e_a,[e_b,e_e]] + [e_b,[e_e,e_a]] + [e_e,[e_a,e_b]], component f.
        for (int f = 0; f < d_; ++f) {
          double s = 0.0;
          for (int h = 0; h < d_; ++h) {
            s += c(b, e, h) * c(a, h, f) + c(e, a, h) * c(b, h, f) + c(a, b, h) * c(e, h, f);
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return worst;
}

Matrix LieAlgebraData::ad_matrix(const Vector& x) const {
  require_dims(x.size() == d_, "ad_matrix: dimension mismatch");
  Matrix m = Matrix::Zero(d_, d_);
  for (int a = 0; a < d_; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < d_; ++b)
      for (int e = 0; e < d_; ++e) m(e, b) += x(a) * c(a, b, e);
  }
  return m;
}

Vector LieAlgebraData::bracket(const Vector& x, const Vector& y) const {
  require_dims(y.size() == d_, "bracket: dimension mismatch");
  return ad_matrix(x) * y;
}

Vector LieAlgebraData::ad_star(const Vector& xi, const Vector& mu) const {
  require_dims(xi.size() == d_ && mu.size() == d_, "ad_star: dimension mismatch");
  // (ad*_xi mu)_e = mu([xi, e_e]) = (ad_xi)^T mu.
  return ad_matrix(xi).transpose() * mu;
}

Matrix LieAlgebraData::ad_star_in_xi(const Vector& mu) const {
  require_dims(mu.size() == d_, "ad_star_in_xi: dimension mismatch");
  Matrix m = Matrix::Zero(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int e = 0; e < d_; ++e) {
      double s = 0.0;
      for (int f = 0; f < d_; ++f) s += c(i, e, f) * mu(f);
      m(e, i) = s;
    }
  return m;
}

Vector LieAlgebraData::metric_flat(const Vector& xi) const {
  if (!metric_) throw InputError("Lie algebra has no metric");
  return *metric_ * xi;
}

Vector LieAlgebraData::metric_sharp(const Vector& mu) const {
  if (!metric_) throw InputError("Lie algebra has no metric");
  return metric_->ldlt().solve(mu);
}

double LieAlgebraData::dual_inner(const Vector& mu, const Vector& nu) const {
  return mu.dot(metric_sharp(nu));
}

Rotation::Rotation(const Matrix3& r) : r_(r) {
  if (!r.allFinite()) throw InputError("Rotation: non-finite entries");
  if ((r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(r.determinant() - 1.0) > 1e-10) {
    throw InputError("Rotation: matrix is not in SO(3)");
  }
}

Rotation Rotation::project(const Matrix3& m) {
  Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 u = svd.matrixU();
  const Matrix3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return Rotation(u * v.transpose(), Unchecked{});
}

Matrix3 so3_hat(const Vector3& x) {
  Matrix3 m;
  m << 0.0, -x(2), x(1),
       x(2), 0.0, -x(0),
       -x(1), x(0), 0.0;
  return m;
}

Vector3 so3_vee(const Matrix3& x) {
  if ((x + x.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("so3_vee: matrix is not skew");
  return Vector3(x(2, 1), x(0, 2), x(1, 0));
}

Rotation exp_so3(const Vector3& x) {
  const double theta2 = x.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;
  double b;
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Matrix3 k = so3_hat(x);
  return Rotation(Matrix3::Identity() + a * k + b * k * k);
}

Vector3 coad(const Rotation& g, const Vector3& mu) { return g.matrix() * mu; }

std::vector<Vector3> coad_k(const Rotation& g, const std::vector<Vector3>& mus) {
  std::vector<Vector3> out;
  out.reserve(mus.size());
  for (const auto& mu : mus) out.push_back(coad(g, mu));
  return out;
}

std::vector<Vector> coad_k(const Matrix& coad_g, const std::vector<Vector>& mus) {
  std::vector<Vector> out;
  out.reserve(mus.size());
  for (const auto& mu : mus) {
    require_dims(mu.size() == coad_g.cols(), "coad_k: dimension mismatch");
    out.push_back(coad_g * mu);
  }
  return out;
}

Subspace isotropy_subalgebra(const LieAlgebraData& alg, const std::vector<Vector>& mus, const Tolerance& tol) {
  const int d = alg.dim();
  if (mus.empty()) return Subspace::full(d);
  Matrix stacked(d * static_cast<int>(mus.size()), d);
  for (std::size_t a = 0; a < mus.size(); ++a) {
    stacked.middleRows(static_cast<Eigen::Index>(a) * d, d) = alg.ad_star_in_xi(mus[a]);
  }
  return kernel(stacked, tol);
}

std::vector<Vector> coadjoint_generator(const LieAlgebraData& alg, const Vector& xi, const std::vector<Vector>& nus) {
  std::vector<Vector> out;
  out.reserve(nus.size());
  for (const auto& nu : nus) out.push_back(-alg.ad_star(xi, nu));
  return out;
}

Rotation rotation_from_quaternion(double w, double x, double y, double z) {
  Eigen::Quaterniond q(w, x, y, z);
  if (!(q.norm() > 0.0)) throw InputError("rotation_from_quaternion: zero quaternion");
  q.normalize();
  return Rotation::project(q.toRotationMatrix());
}

}  // namespace polyred
