#ifndef RESUMFEM_LINALG_HPP
#define RESUMFEM_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "resumfem/errors.hpp"

namespace resumfem {

using Vector = std::vector<double>;
using Index = std::size_t;

/// Dense row-major matrix; the storage type every operator module works with.
struct DenseMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(Index r, Index c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(Index i, Index j) { return a[i * cols + j]; }
  double operator()(Index i, Index j) const { return a[i * cols + j]; }

  static DenseMatrix identity(Index n) {
    DenseMatrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static DenseMatrix diagonal(const Vector& d) {
    DenseMatrix m(d.size(), d.size());
    for (Index i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
};

struct SvdResult {
  Vector singular_values;  // nonincreasing
  DenseMatrix left_vectors;
  DenseMatrix right_vectors;
};

namespace detail {

using EigenRowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenRowMat> as_eigen(const DenseMatrix& m) {
  return {m.a.data(), static_cast<Eigen::Index>(m.rows),
          static_cast<Eigen::Index>(m.cols)};
}

inline Eigen::Map<const Eigen::VectorXd> as_eigen(const Vector& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& e) {
  DenseMatrix m(static_cast<Index>(e.rows()), static_cast<Index>(e.cols()));
  for (Index i = 0; i < m.rows; ++i)
    for (Index j = 0; j < m.cols; ++j)
      m(i, j) = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return m;
}

inline Vector from_eigen(const Eigen::VectorXd& e) {
  return Vector(e.data(), e.data() + e.size());
}

inline bool all_finite(const DenseMatrix& m) {
  for (double x : m.a)
    if (!std::isfinite(x)) return false;
  return true;
}

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace detail

inline Vector matvec(const DenseMatrix& A, const Vector& x) {
  Vector y(A.rows, 0.0);
  for (Index i = 0; i < A.rows; ++i) {
    double s = 0.0;
    const double* row = A.a.data() + i * A.cols;
    for (Index j = 0; j < A.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline double norm2(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Discrete L2 norm weighted by an SPD matrix: sqrt(v' W v).
inline double norm_weighted(const DenseMatrix& W, const Vector& v) {
  Vector wv = matvec(W, v);
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += v[i] * wv[i];
  return std::sqrt(std::max(0.0, s));
}

inline SvdResult svd(const DenseMatrix& A) {
  if (!detail::all_finite(A)) throw NonFinite("svd: nonfinite input");
  Eigen::JacobiSVD<Eigen::MatrixXd> s(detail::as_eigen(A),
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.singular_values = detail::from_eigen(Eigen::VectorXd(s.singularValues()));
  out.left_vectors = detail::from_eigen(Eigen::MatrixXd(s.matrixU()));
  out.right_vectors = detail::from_eigen(Eigen::MatrixXd(s.matrixV()));
  return out;
}

inline Vector singular_values(const DenseMatrix& A) {
  if (!detail::all_finite(A)) throw NonFinite("singular_values: nonfinite input");
  Eigen::JacobiSVD<Eigen::MatrixXd> s(detail::as_eigen(A));
  return detail::from_eigen(Eigen::VectorXd(s.singularValues()));
}

inline Vector solve_dense(const DenseMatrix& A, const Vector& b) {
  if (A.rows != A.cols) throw SingularMatrix("solve_dense: non-square matrix");
  if (!detail::all_finite(A) || !detail::all_finite(b))
    throw NonFinite("solve_dense: nonfinite input");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(detail::as_eigen(A));
  const double pmax = lu.maxPivot();
  if (pmax == 0.0) throw SingularMatrix("solve_dense: zero matrix");
  lu.setThreshold(1e-14);
  if (!lu.isInvertible())
    throw SingularMatrix("solve_dense: sigma_min/sigma_max <= 1e-14");
  return detail::from_eigen(Eigen::VectorXd(lu.solve(detail::as_eigen(b))));
}

inline double cond2(const DenseMatrix& A) {
  if (A.rows != A.cols) throw SingularMatrix("cond2: non-square matrix");
  Vector s = singular_values(A);
  if (s.back() == 0.0) throw SingularMatrix("cond2: singular matrix");
  return s.front() / s.back();
}

inline double frobenius(const DenseMatrix& A) {
  double s = 0.0;
  for (double x : A.a) s += x * x;
  return std::sqrt(s);
}

inline double op_norm(const DenseMatrix& A) {
  return singular_values(A).front();
}

/// Frobenius condition number ||A||_F ||A^-1||_F.
inline double cond_frobenius(const DenseMatrix& A) {
  Vector s = singular_values(A);
  if (s.back() == 0.0) throw SingularMatrix("cond_frobenius: singular matrix");
  double fa = 0.0, fi = 0.0;
  for (double x : s) {
    fa += x * x;
    fi += 1.0 / (x * x);
  }
  return std::sqrt(fa) * std::sqrt(fi);
}

/// Cached Cholesky factorization for the SPD systems solved repeatedly by the
/// series recurrence. Falls back on LU if the matrix is not numerically SPD.
class CachedSolver {
 public:
  explicit CachedSolver(const DenseMatrix& A) {
    if (A.rows != A.cols) throw SingularMatrix("CachedSolver: non-square");
    if (!detail::all_finite(A)) throw NonFinite("CachedSolver: nonfinite matrix");
    Eigen::MatrixXd m = detail::as_eigen(A);
    llt_.compute(m);
    if (llt_.info() != Eigen::Success) {
      lu_ = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(m);
      Eigen::VectorXd d = lu_->matrixLU().diagonal().cwiseAbs();
      if (d.minCoeff() <= 1e-300)
        throw SingularMatrix("CachedSolver: singular matrix");
    }
  }

  Vector solve(const Vector& b) const {
    Eigen::VectorXd x = lu_ ? lu_->solve(detail::as_eigen(b).eval())
                            : llt_.solve(detail::as_eigen(b).eval());
    return detail::from_eigen(x);
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

} // namespace resumfem

#endif
