#ifndef RESUMFEM_RESUMMATION_HPP
#define RESUMFEM_RESUMMATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "resumfem/errors.hpp"
#include "resumfem/linalg.hpp"
#include "resumfem/models.hpp"
#include "resumfem/operators.hpp"
#include "resumfem/quadrature.hpp"

namespace resumfem {

enum class NormKind { euclidean, mass, lumped_mass };

struct PartialSumRadius {
  double value = 0.0;
  bool zero_highest_term = false;
};

/// Radius of validity of the truncated series for precision eps:
/// dt* = (eps ||u_1|| / ||u_m||)^(1/(m-1)).
inline PartialSumRadius partial_sum_radius(const std::vector<Vector>& terms,
                                           double eps,
                                           const DenseMatrix* mass = nullptr) {
  const Index m = terms.size() - 1;
  auto nrm = [&](const Vector& v) {
    return mass ? norm_weighted(*mass, v) : norm2(v);
  };
  const double n1 = nrm(terms[1]);
  const double nm = nrm(terms[m]);
  PartialSumRadius out;
  if (nm <= 1e-300) {
    out.zero_highest_term = true;
    return out;
  }
  out.value = std::pow(eps * n1 / nm, 1.0 / static_cast<double>(m - 1));
  return out;
}

/// Per-node Borel-transformed coefficients b_k = u_{k+1} / k!.
struct BorelSeries {
  Index n_nodes = 0;
  Index length = 0;                  // m coefficients per node
  std::vector<Vector> coeffs;        // coeffs[node][k]
};

inline BorelSeries borel(const std::vector<Vector>& terms) {
  BorelSeries bs;
  const Index m = terms.size() - 1;
  bs.n_nodes = terms[0].size();
  bs.length = m;
  bs.coeffs.assign(bs.n_nodes, Vector(m));
  double fact = 1.0;
  for (Index k = 0; k < m; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    for (Index i = 0; i < bs.n_nodes; ++i)
      bs.coeffs[i][k] = terms[k + 1][i] / fact;
  }
  return bs;
}

/// One rational approximant: num degree r_eff, den degree s_eff, den(0) = 1.
struct PadeApproximant {
  Vector num;
  Vector den;
  Index r_eff = 0;
  Index s_eff = 0;

  double value(double x) const {
    double n = 0.0;
    for (Index k = num.size(); k-- > 0;) n = n * x + num[k];
    double d = 0.0;
    for (Index k = den.size(); k-- > 0;) d = d * x + den[k];
    return n / d;
  }

  double derivative(double x) const {
    double n = 0.0, dn = 0.0;
    for (Index k = num.size(); k-- > 0;) {
      dn = dn * x + n;
      n = n * x + num[k];
    }
    double d = 0.0, dd = 0.0;
    for (Index k = den.size(); k-- > 0;) {
      dd = dd * x + d;
      d = d * x + den[k];
    }
    return (dn * d - n * dd) / (d * d);
  }

  double num_scale(double x) const {
    double s = 0.0, xp = 1.0;
    const double ax = std::abs(x);
    for (double c : num) {
      s += std::abs(c) * xp;
      xp *= ax;
    }
    return s;
  }

  double den_value(double x) const {
    double d = 0.0;
    for (Index k = den.size(); k-- > 0;) d = d * x + den[k];
    return d;
  }
};

/// Robust Pade fit of a truncated series via the SVD of the Toeplitz block;
/// near-rank-deficient blocks (non-normal Pade table) reduce s, then r.
inline PadeApproximant pade(const Vector& c, Index r, Index s,
                            double rank_tol = 1e-13) {
  if (c.size() < r + s + 1)
    throw Error("pade: need r+s+1 series coefficients");
  for (double x : c)
    if (!std::isfinite(x)) throw NonFinite("pade: nonfinite series");
  PadeApproximant out;
  double cmax = 0.0;
  for (Index k = 0; k <= r + s; ++k) cmax = std::max(cmax, std::abs(c[k]));
  if (cmax == 0.0) {
    out.num = {0.0};
    out.den = {1.0};
    return out;
  }
  Vector b;
  while (s > 0) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s),
                                              static_cast<Eigen::Index>(s + 1));
    for (Index i = 0; i < s; ++i)
      for (Index j = 0; j <= s; ++j) {
        // coefficient of xi^(r+1+i) in den * series must vanish
        const long k = static_cast<long>(r) + 1 + static_cast<long>(i) - static_cast<long>(j);
        if (k >= 0 && k <= static_cast<long>(r + s))
          C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              c[static_cast<Index>(k)];
      }
    Eigen::JacobiSVD<Eigen::MatrixXd> sv(C, Eigen::ComputeFullV);
    const auto& sig = sv.singularValues();
    const double smax = sig.size() ? sig(0) : 0.0;
    Index deficient = 0;
    for (Eigen::Index i = 0; i < sig.size(); ++i)
      if (sig(i) <= rank_tol * smax) ++deficient;
    if (smax == 0.0) deficient = s;
    if (deficient > 0) {
      s = (deficient >= s) ? 0 : s - deficient;
      continue;
    }
    Eigen::VectorXd nullvec = sv.matrixV().col(static_cast<Eigen::Index>(s));
    double bmax = nullvec.cwiseAbs().maxCoeff();
    if (std::abs(nullvec(0)) < 1e-8 * bmax) {
      // denominator root at the origin; step out of the degenerate block
      if (r > 0) --r; else --s;
      continue;
    }
    b.assign(nullvec.data(), nullvec.data() + nullvec.size());
    for (double& x : b) x /= b[0];
    b[0] = 1.0;
    break;
  }
  if (s == 0) b = {1.0};
  Vector a(r + 1, 0.0);
  for (Index k = 0; k <= r; ++k) {
    double sum = 0.0;
    for (Index j = 0; j <= std::min<Index>(k, s); ++j) sum += b[j] * c[k - j];
    a[k] = sum;
  }
  // effective degrees after rank reduction
  Index re = a.size();
  while (re > 1 && std::abs(a[re - 1]) <= rank_tol * cmax) --re;
  a.resize(re);
  Index se = b.size();
  while (se > 1 && std::abs(b[se - 1]) <= rank_tol) --se;
  b.resize(se);
  out.num = std::move(a);
  out.den = std::move(b);
  out.r_eff = out.num.size() - 1;
  out.s_eff = out.den.size() - 1;
  return out;
}

struct PadeSet {
  std::vector<PadeApproximant> nodes;
};

inline PadeSet pade_set(const BorelSeries& bs, Index r, Index s,
                        double rank_tol = 1e-13) {
  PadeSet ps;
  ps.nodes.reserve(bs.n_nodes);
  for (Index i = 0; i < bs.n_nodes; ++i)
    ps.nodes.push_back(pade(bs.coeffs[i], r, s, rank_tol));
  return ps;
}

/// Numerical flow Phi_t(u0) = u0 + t * sum_j P(xi_j t) w_j per node, with the
/// Laplace integral along the positive real axis by Gauss-Laguerre quadrature.
class FlowEvaluator {
 public:
  FlowEvaluator(Vector u0, PadeSet pades, Index n_laguerre)
      : u0_(std::move(u0)),
        pades_(std::move(pades)),
        rule_(gauss_rule(QuadKind::laguerre, n_laguerre)) {}

  const Vector& initial_state() const { return u0_; }
  const PadeSet& pades() const { return pades_; }

  Vector flow(double t) const {
    Vector out(u0_.size());
    for (Index i = 0; i < u0_.size(); ++i) {
      const PadeApproximant& p = pades_.nodes[i];
      double s = 0.0;
      for (Index j = 0; j < rule_.nodes.size(); ++j) {
        const double x = rule_.nodes[j] * t;
        check_pole(p, x, i);
        s += p.value(x) * rule_.weights[j];
      }
      out[i] = u0_[i] + t * s;
    }
    return out;
  }

  Vector flow_derivative(double t) const {
    Vector out(u0_.size());
    for (Index i = 0; i < u0_.size(); ++i) {
      const PadeApproximant& p = pades_.nodes[i];
      double s = 0.0;
      for (Index j = 0; j < rule_.nodes.size(); ++j) {
        const double x = rule_.nodes[j] * t;
        check_pole(p, x, i);
        s += (p.value(x) + t * rule_.nodes[j] * p.derivative(x)) * rule_.weights[j];
      }
      out[i] = s;
    }
    return out;
  }

 private:
  static void check_pole(const PadeApproximant& p, double x, Index node) {
    if (std::abs(p.den_value(x)) < 1e-10 * p.num_scale(x))
      throw PoleOnPath("flow: Pade pole near evaluation point, node " +
                       std::to_string(node));
  }

  Vector u0_;
  PadeSet pades_;
  QuadratureRule rule_;
};

inline FlowEvaluator make_flow(const std::vector<Vector>& terms, Index r, Index s,
                               Index n_laguerre, double rank_tol = 1e-13) {
  return FlowEvaluator(terms[0], pade_set(borel(terms), r, s, rank_tol), n_laguerre);
}

enum class ResidualSystem {
  interior,       // Dirichlet-reduced system, the printed formula
  full_assembly,  // raw assembled matrices, boundary rows untreated
};

struct ResidualOptions {
  ResidualSystem system = ResidualSystem::interior;
  NormKind numerator_norm = NormKind::euclidean;
  NormKind denominator_norm = NormKind::euclidean;
};

struct ResidualValue {
  double value = 0.0;
  bool zero_derivative = false;
};

namespace detail {

inline double residual_norm(NormKind kind, const Vector& v, const DenseMatrix* M,
                            const DenseMatrix* ML) {
  switch (kind) {
    case NormKind::mass: return norm_weighted(*M, v);
    case NormKind::lumped_mass: return norm_weighted(*ML, v);
    default: return norm2(v);
  }
}

} // namespace detail

/// Relative residual of the semi-discrete system at state (u, dudt), both on
/// the interior dofs. `red` is the reduced system; `full` (plus its lumped
/// mass if a lumped norm is requested) backs the full-assembly variant.
inline ResidualValue residual(const RecurrenceModel& model, const Operators& red,
                              const Vector& u, const Vector& dudt,
                              const ResidualOptions& opt = {},
                              const Operators* full = nullptr,
                              const DenseMatrix* lumped_full = nullptr) {
  ResidualValue out;
  if (opt.system == ResidualSystem::interior) {
    Vector mdu = matvec(red.M, dudt);
    Vector a = model.semi_discrete_rhs(red, u);
    if (norm2(mdu) <= 1e-300) {
      out.zero_derivative = true;
      out.value = detail::residual_norm(opt.numerator_norm, a, &red.M, &red.M);
      return out;
    }
    Vector defect(mdu.size());
    for (Index i = 0; i < defect.size(); ++i) defect[i] = mdu[i] - a[i];
    const double num = detail::residual_norm(opt.numerator_norm, defect, &red.M, &red.M);
    const double den = detail::residual_norm(opt.denominator_norm, dudt, &red.M, &red.M);
    out.value = num / den;
    return out;
  }
  // full-assembly variant: boundary values of u and du/dt are the Dirichlet
  // data (zero), boundary rows of M du/dt - A(u) are kept.
  Vector uf = extend_with_zero_boundary(u);
  Vector duf = extend_with_zero_boundary(dudt);
  Vector mdu = matvec(full->M, duf);
  Vector a = model.semi_discrete_rhs_full(*full, uf);
  if (norm2(mdu) <= 1e-300) {
    out.zero_derivative = true;
    out.value = detail::residual_norm(opt.numerator_norm, a, &full->M, lumped_full);
    return out;
  }
  Vector defect(mdu.size());
  for (Index i = 0; i < defect.size(); ++i) defect[i] = mdu[i] - a[i];
  const double num =
      detail::residual_norm(opt.numerator_norm, defect, &full->M, lumped_full);
  const double den =
      detail::residual_norm(opt.denominator_norm, duf, &full->M, lumped_full);
  out.value = num / den;
  return out;
}

} // namespace resumfem

#endif
