#ifndef RESUMFEM_MODELS_HPP
#define RESUMFEM_MODELS_HPP

#include <string>
#include <vector>

#include "resumfem/linalg.hpp"
#include "resumfem/operators.hpp"

namespace resumfem {

enum class ModelKind { heat, burgers };

/// Semi-discrete right-hand sides for the two shipped PDE models.
///
/// heat:    A(u)   = -nu K u
///          A_k    = -nu K u_k
/// burgers: A(u)   = -nu K u - D(u, u)
///          A_k    = -nu K u_k - sum_{r=0..k} D(u_{k-r}, u_r)
/// where D(w, u)_i = int phi_i u w_x is the convection contraction.
struct RecurrenceModel {
  ModelKind kind = ModelKind::heat;
  double nu = 1.0;

  std::string name() const { return kind == ModelKind::heat ? "heat" : "burgers"; }

  /// A_k on the Dirichlet-reduced interior system.
  Vector rhs(const Operators& red, const std::vector<Vector>& terms, Index k) const {
    Vector acc = matvec(red.K, terms[k]);
    for (double& x : acc) x *= -nu;
    if (kind == ModelKind::burgers) {
      for (Index r = 0; r <= k; ++r) {
        Vector conv = red.D.apply_interior(terms[k - r], terms[r]);
        for (Index i = 0; i < acc.size(); ++i) acc[i] -= conv[i];
      }
    }
    return acc;
  }

  /// A(u) on the interior system.
  Vector semi_discrete_rhs(const Operators& red, const Vector& u) const {
    Vector acc = matvec(red.K, u);
    for (double& x : acc) x *= -nu;
    if (kind == ModelKind::burgers) {
      Vector conv = red.D.apply_interior(u, u);
      for (Index i = 0; i < acc.size(); ++i) acc[i] -= conv[i];
    }
    return acc;
  }

  /// A(u) assembled on the full node set (boundary rows untreated); u is the
  /// full vector with boundary values filled in.
  Vector semi_discrete_rhs_full(const Operators& full, const Vector& u) const {
    Vector acc = matvec(full.K, u);
    for (double& x : acc) x *= -nu;
    if (kind == ModelKind::burgers) {
      Vector conv = full.D.apply(u, u);
      for (Index i = 0; i < acc.size(); ++i) acc[i] -= conv[i];
    }
    return acc;
  }
};

inline RecurrenceModel heat_model(double nu) { return {ModelKind::heat, nu}; }
inline RecurrenceModel burgers_model(double nu) { return {ModelKind::burgers, nu}; }

} // namespace resumfem

#endif
