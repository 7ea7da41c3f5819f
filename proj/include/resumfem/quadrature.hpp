#ifndef RESUMFEM_QUADRATURE_HPP
#define RESUMFEM_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "resumfem/errors.hpp"
#include "resumfem/linalg.hpp"

namespace resumfem {

enum class QuadKind { legendre, laguerre, lobatto };

struct QuadratureRule {
  QuadKind kind;
  Vector nodes;
  Vector weights;
};

namespace detail {

// Golub & Welsch (1969): nodes are the eigenvalues of the symmetric
// tridiagonal Jacobi matrix, weights mu0 * (first eigenvector component)^2.
inline void golub_welsch(const Vector& diag, const Vector& offdiag, double mu0,
                         Vector& nodes, Vector& weights) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = diag[static_cast<Index>(i)];
    if (i + 1 < n) {
      J(i, i + 1) = offdiag[static_cast<Index>(i)];
      J(i + 1, i) = offdiag[static_cast<Index>(i)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(static_cast<Index>(n));
  weights.resize(static_cast<Index>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    nodes[static_cast<Index>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[static_cast<Index>(i)] = mu0 * v0 * v0;
  }
}

inline double legendre_value(unsigned order, double x) {
  double p0 = 1.0, p1 = x;
  if (order == 0) return p0;
  for (unsigned k = 2; k <= order; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

} // namespace detail

inline QuadratureRule gauss_rule(QuadKind kind, Index n) {
  if (n < 1 || n > 64) throw UnsupportedOrder("gauss_rule: n out of range");
  QuadratureRule rule;
  rule.kind = kind;
  switch (kind) {
    case QuadKind::legendre: {
      Vector d(n, 0.0), e(n > 0 ? n - 1 : 0);
      for (Index i = 1; i < n; ++i) {
        double k = static_cast<double>(i);
        e[i - 1] = k / std::sqrt(4.0 * k * k - 1.0);
      }
      detail::golub_welsch(d, e, 2.0, rule.nodes, rule.weights);
      break;
    }
    case QuadKind::laguerre: {
      Vector d(n), e(n > 0 ? n - 1 : 0);
      for (Index i = 0; i < n; ++i) d[i] = 2.0 * static_cast<double>(i) + 1.0;
      for (Index i = 1; i < n; ++i) e[i - 1] = static_cast<double>(i);
      detail::golub_welsch(d, e, 1.0, rule.nodes, rule.weights);
      break;
    }
    case QuadKind::lobatto: {
      if (n < 2) throw UnsupportedOrder("gauss_rule: lobatto needs n >= 2");
      rule.nodes.assign(n, 0.0);
      rule.weights.assign(n, 0.0);
      const double nn = static_cast<double>(n);
      const double wend = 2.0 / (nn * (nn - 1.0));
      rule.nodes.front() = -1.0;
      rule.nodes.back() = 1.0;
      rule.weights.front() = wend;
      rule.weights.back() = wend;
      if (n > 2) {
        // Interior Lobatto nodes are the Gauss nodes of the Jacobi(1,1) weight.
        Index ni = n - 2;
        Vector d(ni, 0.0), e(ni > 0 ? ni - 1 : 0);
        for (Index i = 1; i < ni; ++i) {
          double k = static_cast<double>(i);
          e[i - 1] = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
        }
        Vector xs, ws;
        detail::golub_welsch(d, e, 4.0 / 3.0, xs, ws);
        for (Index i = 0; i < ni; ++i) {
          double x = xs[i];
          double pl = detail::legendre_value(static_cast<unsigned>(n - 1), x);
          rule.nodes[i + 1] = x;
          rule.weights[i + 1] = 2.0 / (nn * (nn - 1.0) * pl * pl);
        }
      }
      break;
    }
  }
  return rule;
}

} // namespace resumfem

#endif
