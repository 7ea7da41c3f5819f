#ifndef RESUMFEM_OPERATORS_HPP
#define RESUMFEM_OPERATORS_HPP

#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include "resumfem/errors.hpp"
#include "resumfem/fem.hpp"
#include "resumfem/linalg.hpp"
#include "resumfem/quadrature.hpp"

namespace resumfem {

/// Rank-3 convection tensor D_{i,j,l} = int phi_i phi_j_x phi_l, stored as the
/// per-cell local tensor (identical on every cell of a uniform mesh) plus
/// connectivity; contractions assemble on the fly.
class ConvectionTensor {
 public:
  ConvectionTensor() = default;
  ConvectionTensor(Vector local, Index n_cells, Index p)
      : local_(std::move(local)), n_cells_(n_cells), p_(p) {}

  Index n_nodes() const { return p_ * n_cells_ + 1; }
  Index p() const { return p_; }
  Index n_cells() const { return n_cells_; }

  double local(Index a, Index b, Index c) const {
    const Index q = p_ + 1;
    return local_[(a * q + b) * q + c];
  }

  /// r_i = sum_{j,l} D_{i,j,l} w_j u_l = int phi_i u_h (w_h)_x, full vectors.
  Vector apply(const Vector& w, const Vector& u) const {
    const Index q = p_ + 1;
    Vector out(n_nodes(), 0.0);
    for (Index c = 0; c < n_cells_; ++c) {
      const Index base = c * p_;
      for (Index a = 0; a < q; ++a) {
        double s = 0.0;
        for (Index b = 0; b < q; ++b) {
          const double wb = w[base + b];
          if (wb == 0.0) continue;
          for (Index l = 0; l < q; ++l)
            s += local(a, b, l) * wb * u[base + l];
        }
        out[base + a] += s;
      }
    }
    return out;
  }

  /// Interior-to-interior contraction under homogeneous Dirichlet data.
  Vector apply_interior(const Vector& w_in, const Vector& u_in) const {
    Vector w = extend_with_zero_boundary(w_in);
    Vector u = extend_with_zero_boundary(u_in);
    Vector full = apply(w, u);
    return restrict_interior(full);
  }

  /// Frobenius norm of the assembled global tensor (entries shared between
  /// adjacent cells are summed before squaring).
  double frobenius() const {
    const Index q = p_ + 1;
    const Index n = n_nodes();
    std::unordered_map<std::size_t, double> entries;
    entries.reserve(n_cells_ * q * q * q);
    for (Index c = 0; c < n_cells_; ++c) {
      const Index base = c * p_;
      for (Index a = 0; a < q; ++a)
        for (Index b = 0; b < q; ++b)
          for (Index l = 0; l < q; ++l) {
            std::size_t key = ((base + a) * n + (base + b)) * n + (base + l);
            entries[key] += local(a, b, l);
          }
    }
    double s = 0.0;
    for (const auto& kv : entries) s += kv.second * kv.second;
    return std::sqrt(s);
  }

  /// Column-sum over the test index: sum_l D_{i,j,l} = int phi_i phi_j_x.
  DenseMatrix contract_test_index() const {
    const Index q = p_ + 1;
    DenseMatrix out(n_nodes(), n_nodes());
    for (Index c = 0; c < n_cells_; ++c) {
      const Index base = c * p_;
      for (Index a = 0; a < q; ++a)
        for (Index b = 0; b < q; ++b) {
          double s = 0.0;
          for (Index l = 0; l < q; ++l) s += local(a, b, l);
          out(base + a, base + b) += s;
        }
    }
    return out;
  }

 private:
  Vector local_;  // (p+1)^3 reference-cell tensor, h-independent
  Index n_cells_ = 0;
  Index p_ = 0;
};

struct Operators {
  DenseMatrix M;
  DenseMatrix K;
  ConvectionTensor D;
  std::vector<Index> interior;
  std::vector<Index> boundary;
  bool reduced = false;
};

enum class LumpMethod { row_sum, gauss_lobatto };

inline Operators assemble(const FemSpace& s) {
  const Index p = s.p;
  const Index q = p + 1;
  const Index n = s.n_nodes();
  const double h = s.mesh.h();
  // One Gauss-Legendre rule exact for the degree-3p convection integrand.
  const Index nq = (3 * p + 1) / 2 + 1;
  QuadratureRule rule = gauss_rule(QuadKind::legendre, nq);
  LagrangeBasis basis(p);

  std::vector<Vector> V(q, Vector(rule.nodes.size()));
  std::vector<Vector> G(q, Vector(rule.nodes.size()));
  for (Index i = 0; i < q; ++i)
    for (Index k = 0; k < rule.nodes.size(); ++k) {
      V[i][k] = basis.value(i, rule.nodes[k]);
      G[i][k] = basis.derivative(i, rule.nodes[k]);
    }

  DenseMatrix Mloc(q, q), Kloc(q, q);
  Vector Dloc(q * q * q, 0.0);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j) {
      double m = 0.0, k2 = 0.0;
      for (Index k = 0; k < rule.nodes.size(); ++k) {
        m += rule.weights[k] * V[i][k] * V[j][k];
        k2 += rule.weights[k] * G[i][k] * G[j][k];
      }
      Mloc(i, j) = 0.5 * h * m;
      Kloc(i, j) = (2.0 / h) * k2;
    }
  for (Index a = 0; a < q; ++a)
    for (Index b = 0; b < q; ++b)
      for (Index l = 0; l < q; ++l) {
        double d = 0.0;
        for (Index k = 0; k < rule.nodes.size(); ++k)
          d += rule.weights[k] * V[a][k] * G[b][k] * V[l][k];
        Dloc[(a * q + b) * q + l] = d;  // (h/2)*(2/h) cancels
      }

  Operators ops;
  ops.M = DenseMatrix(n, n);
  ops.K = DenseMatrix(n, n);
  for (Index c = 0; c < s.mesh.n_cells; ++c) {
    const auto& conn = s.connectivity[c];
    for (Index i = 0; i < q; ++i)
      for (Index j = 0; j < q; ++j) {
        ops.M(conn[i], conn[j]) += Mloc(i, j);
        ops.K(conn[i], conn[j]) += Kloc(i, j);
      }
  }
  ops.D = ConvectionTensor(std::move(Dloc), s.mesh.n_cells, p);
  ops.boundary = {0, n - 1};
  ops.interior.resize(n - 2);
  for (Index i = 0; i + 2 < n; ++i) ops.interior[i] = i + 1;
  return ops;
}

inline DenseMatrix lump_mass(const FemSpace& s, LumpMethod method) {
  const Index n = s.n_nodes();
  const Index q = s.p + 1;
  const double h = s.mesh.h();
  Vector diag(n, 0.0);
  if (method == LumpMethod::row_sum) {
    Operators ops = assemble(s);
    for (Index i = 0; i < n; ++i) {
      double sum = 0.0;
      for (Index j = 0; j < n; ++j) sum += ops.M(i, j);
      diag[i] = sum;
    }
  } else {
    // p+1 Lobatto points per cell; the rule integrates each basis function
    // exactly, so sum(diag) = |Omega| is preserved for every degree.
    QuadratureRule rule = gauss_rule(QuadKind::lobatto, q);
    LagrangeBasis basis(s.p);
    for (Index c = 0; c < s.mesh.n_cells; ++c) {
      const auto& conn = s.connectivity[c];
      for (Index i = 0; i < q; ++i) {
        double v = 0.0;
        for (Index k = 0; k < rule.nodes.size(); ++k)
          v += rule.weights[k] * basis.value(i, rule.nodes[k]);
        diag[conn[i]] += 0.5 * h * v;
      }
    }
  }
  return DenseMatrix::diagonal(diag);
}

namespace detail {

inline DenseMatrix take_block(const DenseMatrix& A, const std::vector<Index>& idx) {
  DenseMatrix B(idx.size(), idx.size());
  for (Index i = 0; i < idx.size(); ++i)
    for (Index j = 0; j < idx.size(); ++j) B(i, j) = A(idx[i], idx[j]);
  return B;
}

} // namespace detail

/// Interior-block reduction for homogeneous Dirichlet conditions.
inline Operators reduce_dirichlet(const Operators& ops) {
  Operators out;
  out.M = detail::take_block(ops.M, ops.interior);
  out.K = detail::take_block(ops.K, ops.interior);
  out.D = ops.D;  // contraction embeds/restricts through apply_interior
  out.interior.resize(out.M.rows);
  for (Index i = 0; i < out.M.rows; ++i) out.interior[i] = i;
  out.reduced = true;
  return out;
}

/// Symmetric Dirichlet elimination: zero boundary rows/columns, unit diagonal.
/// This is the system form whose spectrum the conditioning tables use.
inline DenseMatrix apply_dirichlet_identity(const DenseMatrix& A,
                                            const std::vector<Index>& boundary) {
  DenseMatrix B = A;
  for (Index b : boundary) {
    for (Index j = 0; j < B.cols; ++j) B(b, j) = 0.0;
    for (Index i = 0; i < B.rows; ++i) B(i, b) = 0.0;
    B(b, b) = 1.0;
  }
  return B;
}

} // namespace resumfem

#endif
