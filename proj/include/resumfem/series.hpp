#ifndef RESUMFEM_SERIES_HPP
#define RESUMFEM_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "resumfem/errors.hpp"
#include "resumfem/linalg.hpp"
#include "resumfem/models.hpp"
#include "resumfem/operators.hpp"

namespace resumfem {

enum class StabilizationMode { none, constant, doubling, geometric };

/// Schedule of the artificial-diffusion coefficients alpha_k used in the
/// stabilized recurrence solves (M + alpha_k K) u_{k+1} = A_k / (k+1).
struct StabilizationPlan {
  StabilizationMode mode = StabilizationMode::none;
  double alpha0 = 0.0;
  double ratio = 1.0;

  double alpha(Index k) const {
    switch (mode) {
      case StabilizationMode::none: return 0.0;
      case StabilizationMode::constant: return alpha0;
      case StabilizationMode::doubling:
      case StabilizationMode::geometric:
        return alpha0 * std::pow(ratio, static_cast<double>(k));
    }
    return 0.0;
  }

  static StabilizationPlan none() { return {}; }
  static StabilizationPlan constant(double a0) {
    return {StabilizationMode::constant, a0, 1.0};
  }
  /// alpha_k = (2^k h)^c, i.e. alpha0 = h^c with ratio 2^c.
  static StabilizationPlan doubling(double h, double c) {
    return {StabilizationMode::doubling, std::pow(h, c), std::pow(2.0, c)};
  }
  static StabilizationPlan geometric(double a0, double R) {
    return {StabilizationMode::geometric, a0, R};
  }

  std::string name() const {
    switch (mode) {
      case StabilizationMode::none: return "none";
      case StabilizationMode::constant: return "constant";
      case StabilizationMode::doubling: return "doubling";
      case StabilizationMode::geometric: return "geometric";
    }
    return "none";
  }
};

struct SeriesTerms {
  Index m = 0;
  std::vector<Vector> terms;  // m+1 interior coefficient vectors u_0..u_m
  StabilizationPlan plan;
};

/// Pre-factorized solvers for (M + alpha_k K); the schedule is fixed per run
/// so continuation restarts reuse the same factorizations.
class TermSolver {
 public:
  TermSolver(const Operators& reduced, const StabilizationPlan& plan, Index m)
      : red_(&reduced), plan_(plan), m_(m) {
    solvers_.reserve(m);
    for (Index k = 0; k < m; ++k) {
      const double a = plan.alpha(k);
      DenseMatrix A = reduced.M;
      if (a != 0.0)
        for (Index i = 0; i < A.a.size(); ++i) A.a[i] += a * reduced.K.a[i];
      solvers_.push_back(std::make_unique<CachedSolver>(A));
    }
  }

  SeriesTerms compute(const RecurrenceModel& model, const Vector& u0) const {
    SeriesTerms st;
    st.m = m_;
    st.plan = plan_;
    st.terms.reserve(m_ + 1);
    st.terms.push_back(u0);
    for (Index k = 0; k < m_; ++k) {
      Vector b = model.rhs(*red_, st.terms, k);
      const double scale = 1.0 / static_cast<double>(k + 1);
      for (double& x : b) x *= scale;
      if (!detail::all_finite(b))
        throw NonFinite("compute_terms: term blow-up at k=" + std::to_string(k + 1));
      st.terms.push_back(solvers_[k]->solve(b));
    }
    return st;
  }

 private:
  const Operators* red_;
  StabilizationPlan plan_;
  Index m_;
  std::vector<std::unique_ptr<CachedSolver>> solvers_;
};

inline SeriesTerms compute_terms(const RecurrenceModel& model, const Operators& reduced,
                                 const Vector& u0, Index m,
                                 const StabilizationPlan& plan) {
  if (m < 1) throw Error("compute_terms: m must be >= 1");
  return TermSolver(reduced, plan, m).compute(model, u0);
}

// ---- exact-term oracles ----------------------------------------------------

/// Heat series term (-nu pi^2)^k / k! * sin(pi x) sampled on a grid.
inline Vector exact_heat_term(Index k, double nu, const Vector& x) {
  double coef = 1.0;
  for (Index j = 1; j <= k; ++j)
    coef *= -nu * std::numbers::pi * std::numbers::pi / static_cast<double>(j);
  Vector v(x.size());
  for (Index i = 0; i < x.size(); ++i)
    v[i] = coef * std::sin(std::numbers::pi * x[i]);
  return v;
}

/// Formal series terms of the inviscid Burgers equation with u0 = sin(2 pi x).
inline Vector exact_inviscid_term(Index k, const Vector& x) {
  if (k > 6) throw OrderTooHigh("exact_inviscid_term: k > 6");
  const double pi = std::numbers::pi;
  Vector v(x.size(), 0.0);
  auto add = [&](double coef, double freq) {
    for (Index i = 0; i < x.size(); ++i) v[i] += coef * std::sin(freq * pi * x[i]);
  };
  const double p2 = pi * pi, p3 = p2 * pi, p4 = p3 * pi, p5 = p4 * pi, p6 = p5 * pi;
  switch (k) {
    case 0: add(1.0, 2.0); break;
    case 1: add(-pi, 4.0); break;
    case 2: add(1.5 * p2, 6.0); add(-0.5 * p2, 2.0); break;
    case 3: add(-16.0 * p3 / 6.0, 8.0); add(8.0 * p3 / 6.0, 4.0); break;
    case 4:
      add(125.0 * p4 / 24.0, 10.0); add(-81.0 * p4 / 24.0, 6.0);
      add(2.0 * p4 / 24.0, 2.0);
      break;
    case 5:
      add(-1296.0 * p5 / 120.0, 12.0); add(1024.0 * p5 / 120.0, 8.0);
      add(-80.0 * p5 / 120.0, 4.0);
      break;
    case 6:
      add(16807.0 * p6 / 720.0, 14.0); add(-15625.0 * p6 / 720.0, 10.0);
      add(2187.0 * p6 / 720.0, 6.0); add(-5.0 * p6 / 720.0, 2.0);
      break;
  }
  return v;
}

/// Viscous Burgers terms for u0 = sin(2 pi x) by exact recursion on the
/// Fourier sine coefficients (basis sin(2 pi j x)); term k excites j <= k+1.
inline Vector exact_viscous_term(Index k, double nu, Index n_modes, const Vector& x) {
  const double pi = std::numbers::pi;
  std::vector<Vector> modes;  // modes[k][j-1]
  modes.push_back(Vector(n_modes, 0.0));
  modes[0][0] = 1.0;
  for (Index kk = 0; kk < k; ++kk) {
    Vector next(n_modes, 0.0);
    // diffusion: nu * u_k'' -> -nu (2 pi j)^2 per mode
    for (Index j = 1; j <= n_modes; ++j) {
      const double w = 2.0 * pi * static_cast<double>(j);
      next[j - 1] += -nu * w * w * modes[kk][j - 1];
    }
    // convection: -sum_r u_r d_x u_{kk-r};
    // sin(a)cos(b) = (sin(a+b) + sin(a-b)) / 2
    for (Index r = 0; r <= kk; ++r) {
      const Vector& A = modes[r];
      const Vector& B = modes[kk - r];
      for (Index ja = 1; ja <= n_modes; ++ja) {
        if (A[ja - 1] == 0.0) continue;
        for (Index jb = 1; jb <= n_modes; ++jb) {
          if (B[jb - 1] == 0.0) continue;
          const double amp = A[ja - 1] * B[jb - 1] * (2.0 * pi * static_cast<double>(jb)) * 0.5;
          const Index jsum = ja + jb;
          if (jsum <= n_modes) next[jsum - 1] -= amp;
          if (ja > jb) next[ja - jb - 1] -= amp;
          else if (jb > ja) next[jb - ja - 1] += amp;
          // ja == jb contributes sin(0) = 0
        }
      }
    }
    for (double& v : next) v /= static_cast<double>(kk + 1);
    modes.push_back(std::move(next));
  }
  Vector out(x.size(), 0.0);
  for (Index j = 1; j <= n_modes; ++j) {
    const double c = modes[k][j - 1];
    if (c == 0.0) continue;
    for (Index i = 0; i < x.size(); ++i)
      out[i] += c * std::sin(2.0 * pi * static_cast<double>(j) * x[i]);
  }
  return out;
}

// ---- error diagnostics ------------------------------------------------------

struct ErrorReport {
  Vector e;            // e_k, k = 0..m
  double slope = 0.0;  // fitted s(h,p)
  double intercept_log10 = 0.0;
  NormKind norm_kind = NormKind::mass;
  bool relative = false;
};

/// Per-order errors against oracle values plus a least-squares fit of
/// log10 e_k over k in [fit_lo, fit_hi].
inline ErrorReport error_report(const SeriesTerms& st,
                                const std::vector<Vector>& oracle,
                                Index fit_lo, Index fit_hi,
                                const DenseMatrix* mass = nullptr,
                                bool relative = false) {
  ErrorReport rep;
  rep.norm_kind = mass ? NormKind::mass : NormKind::euclidean;
  rep.relative = relative;
  auto nrm = [&](const Vector& v) {
    return mass ? norm_weighted(*mass, v) : norm2(v);
  };
  rep.e.resize(st.m + 1);
  for (Index k = 0; k <= st.m; ++k) {
    Vector d(st.terms[k].size());
    bool finite = true;
    for (Index i = 0; i < d.size(); ++i) {
      d[i] = st.terms[k][i] - oracle[k][i];
      finite = finite && std::isfinite(d[i]);
    }
    double e = finite ? nrm(d) : std::numeric_limits<double>::infinity();
    if (relative) {
      const double scale = nrm(oracle[k]);
      if (scale > 0.0) e /= scale;
    }
    rep.e[k] = e;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Index n = 0;
  for (Index k = fit_lo; k <= fit_hi && k <= st.m; ++k) {
    if (!(rep.e[k] > 0.0) || !std::isfinite(rep.e[k])) continue;
    const double xk = static_cast<double>(k);
    const double yk = std::log10(rep.e[k]);
    sx += xk; sy += yk; sxx += xk * xk; sxy += xk * yk;
    ++n;
  }
  if (n < 3) throw DegenerateFit("error_report: fewer than 3 finite points");
  const double dn = static_cast<double>(n);
  rep.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  rep.intercept_log10 = (sy - rep.slope * sx) / dn;
  return rep;
}

struct TwoRegimeFit {
  Index breakpoint = 0;  // last k of the first regime
  double slope1 = 0.0;
  double slope2 = 0.0;
};

/// Piecewise log-linear fit of e_k over k = 1..m, breakpoint by least SSE.
inline TwoRegimeFit two_regime_fit(const Vector& e) {
  const Index m = e.size() - 1;
  std::vector<double> ks, ys;
  for (Index k = 1; k <= m; ++k) {
    if (e[k] > 0.0 && std::isfinite(e[k])) {
      ks.push_back(static_cast<double>(k));
      ys.push_back(std::log10(e[k]));
    }
  }
  if (ks.size() < 4) throw DegenerateFit("two_regime_fit: need 4 finite points");
  auto fit = [&](Index lo, Index hi, double& slope) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(hi - lo);
    for (Index i = lo; i < hi; ++i) {
      sx += ks[i]; sy += ys[i]; sxx += ks[i] * ks[i]; sxy += ks[i] * ys[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double sse = 0.0;
    for (Index i = lo; i < hi; ++i) {
      const double r = ys[i] - (slope * ks[i] + icpt);
      sse += r * r;
    }
    return sse;
  };
  TwoRegimeFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (Index b = 2; b + 2 <= ks.size(); ++b) {
    double s1, s2;
    const double sse = fit(0, b, s1) + fit(b, ks.size(), s2);
    if (sse < best_sse) {
      best_sse = sse;
      best = {static_cast<Index>(ks[b - 1]), s1, s2};
    }
  }
  return best;
}

} // namespace resumfem

#endif
