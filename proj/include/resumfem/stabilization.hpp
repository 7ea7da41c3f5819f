#ifndef RESUMFEM_STABILIZATION_HPP
#define RESUMFEM_STABILIZATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "resumfem/errors.hpp"
#include "resumfem/linalg.hpp"
#include "resumfem/models.hpp"
#include "resumfem/operators.hpp"

namespace resumfem {

enum class CondKind { spectral, frobenius };

inline double condition_number(const DenseMatrix& A, CondKind kind) {
  return kind == CondKind::spectral ? cond2(A) : cond_frobenius(A);
}

inline Vector default_c_grid() {
  Vector g;
  for (int i = 0; i <= 100; ++i) g.push_back(1.50 + 0.02 * i);
  return g;
}

inline Vector default_r_grid() {
  Vector g;
  for (int i = 0; i <= 90; ++i) g.push_back(1.0 + 0.1 * i);
  return g;
}

struct Alpha0Result {
  double c = 0.0;
  double alpha0 = 0.0;
  double kappa = 0.0;
};

/// argmin over the c-grid of kappa(M + h^c K); ties keep the smallest c.
inline Alpha0Result find_alpha0(const DenseMatrix& M, const DenseMatrix& K,
                                double h, const Vector& c_grid,
                                CondKind kind = CondKind::spectral) {
  Alpha0Result best;
  bool first = true;
  for (double c : c_grid) {
    const double a = std::pow(h, c);
    DenseMatrix A = M;
    for (Index i = 0; i < A.a.size(); ++i) A.a[i] += a * K.a[i];
    const double kappa = condition_number(A, kind);
    if (first || kappa < best.kappa) {
      best = {c, a, kappa};
      first = false;
    }
  }
  return best;
}

/// argmin over the r-grid of kappa(M + r alpha0 K) * ||(M + r alpha0 K)^-1||.
inline double find_ratio(const DenseMatrix& M, const DenseMatrix& K, double alpha0,
                         const Vector& r_grid, CondKind kind = CondKind::spectral) {
  if (!(alpha0 > 0.0)) throw Error("find_ratio: alpha0 must be positive");
  double best_r = r_grid.front();
  double best_v = 0.0;
  bool first = true;
  for (double r : r_grid) {
    DenseMatrix A = M;
    const double a = r * alpha0;
    for (Index i = 0; i < A.a.size(); ++i) A.a[i] += a * K.a[i];
    Vector s = singular_values(A);
    if (s.back() == 0.0) throw SingularMatrix("find_ratio: singular matrix");
    double v;
    if (kind == CondKind::spectral)
      v = (s.front() / s.back()) * (1.0 / s.back());
    else {
      double fa = 0.0, fi = 0.0;
      for (double x : s) { fa += x * x; fi += 1.0 / (x * x); }
      v = std::sqrt(fa * fi) * (1.0 / s.back());
    }
    if (first || v < best_v) {
      best_v = v;
      best_r = r;
      first = false;
    }
  }
  return best_r;
}

struct AmplificationFactor {
  double value = 0.0;
  bool no_diffusion = false;  // heat with nu = 0
};

enum class MatrixNorm { frobenius, spectral };

/// Error amplification bound for term k: (kappa(M)/k) ||M||^-1 ||dA/du||,
/// with ||dA/du|| = nu||K|| for heat and nu||K|| + k||D|| for Burgers.
/// kappa is evaluated on the Dirichlet-applied mass matrix; norms are
/// Frobenius by default, matching the printed tables.
inline AmplificationFactor amplification_factor(const RecurrenceModel& model,
                                                const Operators& full, double nu,
                                                Index k,
                                                MatrixNorm norm = MatrixNorm::frobenius) {
  AmplificationFactor out;
  DenseMatrix Mbc = apply_dirichlet_identity(full.M, full.boundary);
  const double kappa = cond2(Mbc);
  auto mat_norm = [&](const DenseMatrix& A) {
    return norm == MatrixNorm::spectral ? op_norm(A) : frobenius(A);
  };
  const double nm = mat_norm(full.M);
  double nda;
  if (model.kind == ModelKind::heat) {
    if (nu == 0.0) {
      out.no_diffusion = true;
      return out;
    }
    nda = nu * mat_norm(full.K);
  } else {
    nda = nu * mat_norm(full.K) + static_cast<double>(k) * full.D.frobenius();
  }
  out.value = kappa / static_cast<double>(k == 0 ? 1 : k) * nda / nm;
  return out;
}

/// Norm of the truncated series operator sum_{k<=m} ((-nu t)^k / k!)(M^-1 K)^k
/// on the interior blocks; <= 1 is the discrete-maximum-principle diagnostic.
/// Mass-weighted operator norm by default (the eigenvalue bound is then
/// exact); Euclidean spectral norm as a toggle.
inline double dmp_norm(const DenseMatrix& M_in, const DenseMatrix& K_in, double nu,
                       double t, Index m, NormKind norm = NormKind::mass) {
  const Index n = M_in.rows;
  if (t < 0.0) throw Error("dmp_norm: t must be >= 0");
  CachedSolver msolve(M_in);
  // S = sum of coefficients * (M^-1 K)^k applied columnwise
  DenseMatrix S = DenseMatrix::identity(n);
  DenseMatrix P = DenseMatrix::identity(n);
  double coef = 1.0;
  for (Index k = 1; k <= m; ++k) {
    coef *= -nu * t / static_cast<double>(k);
    DenseMatrix next(n, n);
    for (Index j = 0; j < n; ++j) {
      Vector col(n);
      for (Index i = 0; i < n; ++i) col[i] = P(i, j);
      Vector kp = matvec(K_in, col);
      Vector mp = msolve.solve(kp);
      for (Index i = 0; i < n; ++i) next(i, j) = mp[i];
    }
    P = next;
    for (Index i = 0; i < n * n; ++i) S.a[i] += coef * P.a[i];
  }
  if (norm == NormKind::euclidean) return op_norm(S);
  // ||S||_M = ||L^T S L^-T||_2 with M = L L^T
  Eigen::MatrixXd Me = detail::as_eigen(M_in);
  Eigen::LLT<Eigen::MatrixXd> llt(Me);
  if (llt.info() != Eigen::Success) throw SingularMatrix("dmp_norm: M not SPD");
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd Se = detail::as_eigen(S);
  Eigen::MatrixXd Y = L.transpose() * Se;
  Eigen::MatrixXd Z = L.transpose().triangularView<Eigen::Upper>().solve(Y.transpose()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> sv(Z);
  return sv.singularValues()(0);
}

/// Largest t with dmp_norm <= 1, located by scan plus bisection.
inline double dmp_threshold(const DenseMatrix& M_in, const DenseMatrix& K_in,
                            double nu, Index m, double t_hi,
                            NormKind norm = NormKind::mass, Index scan = 64) {
  double lo = 0.0, hi = t_hi;
  double prev = 0.0;
  bool found = false;
  for (Index i = 1; i <= scan; ++i) {
    const double t = t_hi * static_cast<double>(i) / static_cast<double>(scan);
    if (dmp_norm(M_in, K_in, nu, t, m, norm) > 1.0 + 1e-12) {
      lo = prev;
      hi = t;
      found = true;
      break;
    }
    prev = t;
  }
  if (!found) return t_hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dmp_norm(M_in, K_in, nu, mid, m, norm) > 1.0 + 1e-12) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace resumfem

#endif
