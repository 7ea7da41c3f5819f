#ifndef RESUMFEM_FEM_HPP
#define RESUMFEM_FEM_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "resumfem/errors.hpp"
#include "resumfem/linalg.hpp"

namespace resumfem {

struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  Index n_cells = 0;

  double h() const { return (b - a) / static_cast<double>(n_cells); }
};

/// Lagrange basis on the reference cell [-1,1] with equispaced nodes.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(Index degree) : p_(degree) {
    nodes_.resize(p_ + 1);
    for (Index i = 0; i <= p_; ++i)
      nodes_[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(p_ == 0 ? 1 : p_);
    if (p_ == 0) nodes_ = {0.0};
  }

  Index degree() const { return p_; }
  const Vector& nodes() const { return nodes_; }

  double value(Index i, double x) const {
    double v = 1.0;
    for (Index j = 0; j <= p_; ++j)
      if (j != i) v *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
    return v;
  }

  double derivative(Index i, double x) const {
    double d = 0.0;
    for (Index k = 0; k <= p_; ++k) {
      if (k == i) continue;
      double term = 1.0 / (nodes_[i] - nodes_[k]);
      for (Index j = 0; j <= p_; ++j)
        if (j != i && j != k) term *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
      d += term;
    }
    return d;
  }

 private:
  Index p_;
  Vector nodes_;
};

struct FemSpace {
  Mesh1D mesh;
  Index p = 1;
  Vector node_coords;                       // N_x global nodes, increasing
  std::vector<std::vector<Index>> connectivity;  // cell -> p+1 global nodes

  Index n_nodes() const { return node_coords.size(); }
  Index n_interior() const { return n_nodes() - 2; }
};

inline FemSpace build_space(double a, double b, Index n_cells, Index p) {
  if (p < 1 || p > 5) throw BadDegree("build_space: degree must be in 1..5");
  if (n_cells < 2 || !(b > a)) throw BadMesh("build_space: invalid mesh");
  FemSpace s;
  s.mesh = {a, b, n_cells};
  s.p = p;
  const Index n_nodes = p * n_cells + 1;
  s.node_coords.resize(n_nodes);
  const double h = s.mesh.h();
  for (Index c = 0; c < n_cells; ++c) {
    double x0 = a + h * static_cast<double>(c);
    for (Index l = 0; l <= p; ++l)
      s.node_coords[c * p + l] = x0 + h * static_cast<double>(l) / static_cast<double>(p);
  }
  s.node_coords.back() = b;
  s.connectivity.resize(n_cells);
  for (Index c = 0; c < n_cells; ++c) {
    s.connectivity[c].resize(p + 1);
    for (Index l = 0; l <= p; ++l) s.connectivity[c][l] = c * p + l;
  }
  return s;
}

/// Nodal interpolant of f onto the space.
inline Vector interpolate(const FemSpace& s, const std::function<double(double)>& f) {
  Vector u(s.n_nodes());
  for (Index i = 0; i < u.size(); ++i) u[i] = f(s.node_coords[i]);
  return u;
}

inline Vector interior_coords(const FemSpace& s) {
  return Vector(s.node_coords.begin() + 1, s.node_coords.end() - 1);
}

inline Vector restrict_interior(const Vector& full) {
  return Vector(full.begin() + 1, full.end() - 1);
}

inline Vector extend_with_zero_boundary(const Vector& interior) {
  Vector full(interior.size() + 2, 0.0);
  std::copy(interior.begin(), interior.end(), full.begin() + 1);
  return full;
}

} // namespace resumfem

#endif
