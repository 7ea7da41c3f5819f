#ifndef RESUMFEM_CONTINUATION_HPP
#define RESUMFEM_CONTINUATION_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "resumfem/errors.hpp"
#include "resumfem/models.hpp"
#include "resumfem/operators.hpp"
#include "resumfem/resummation.hpp"
#include "resumfem/series.hpp"

namespace resumfem {

enum class Termination {
  reached_t_final,
  immediate,            // T == t0
  max_steps,
  step_collapse,
  residual_explosion,
  non_finite,
};

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_final: return "reached_t_final";
    case Termination::immediate: return "immediate";
    case Termination::max_steps: return "max_steps";
    case Termination::step_collapse: return "step_collapse";
    case Termination::residual_explosion: return "residual_explosion";
    case Termination::non_finite: return "non_finite";
  }
  return "unknown";
}

struct ContinuationParams {
  Index m = 5;
  double eps = 1e-3;
  Index r = 2;
  Index s = 2;
  Index n_laguerre = 20;
  double t_final = 1.0;
  double growth = 1.1;
  Index max_steps = 100000;
  ResidualOptions residual_opts;
  double pade_rank_tol = 1e-13;
  bool store_states = false;
};

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double res = 0.0;
};

struct ContinuationTrace {
  std::vector<StepRecord> records;
  std::vector<Vector> states;  // filled when store_states is set
  Vector final_state;
  Termination termination = Termination::reached_t_final;
};

/// Trapezoidal integral of the recorded residuals.
inline double integrated_residual(const ContinuationTrace& trace) {
  if (trace.records.size() < 2)
    throw TooFewPoints("integrated_residual: need at least 2 records");
  double acc = 0.0;
  for (Index i = 1; i < trace.records.size(); ++i) {
    const auto& a = trace.records[i - 1];
    const auto& b = trace.records[i];
    acc += (b.t - a.t) * 0.5 * (a.res + b.res);
  }
  return acc;
}

namespace detail {

struct ResidualEngine {
  const RecurrenceModel* model;
  const Operators* reduced;
  const Operators* full;
  const DenseMatrix* lumped_full;
  ResidualOptions opts;

  double eval(const Vector& u, const Vector& dudt) const {
    return residual(*model, *reduced, u, dudt, opts, full, lumped_full).value;
  }
};

} // namespace detail

/// Adaptive continuation: recompute the series at every restart, seed the step
/// from the partial-sum radius, grow by the factor while the residual test
/// holds, accept the last passing step.
inline ContinuationTrace advance(const RecurrenceModel& model, const Operators& reduced,
                                 const Vector& u0, const StabilizationPlan& plan,
                                 const ContinuationParams& prm,
                                 const Operators* full = nullptr,
                                 const DenseMatrix* lumped_full = nullptr) {
  if (prm.r + prm.s != prm.m - 1) throw BadConfig("advance: r+s must equal m-1");
  ContinuationTrace trace;
  detail::ResidualEngine res{&model, &reduced, full, lumped_full, prm.residual_opts};
  double t = 0.0;
  Vector u = u0;
  trace.final_state = u;
  if (prm.t_final <= 0.0) {
    trace.termination = Termination::immediate;
    return trace;
  }
  TermSolver solver(reduced, plan, prm.m);
  double prev_dt = prm.t_final / 100.0;  // fallback seed
  for (Index step = 0; step < prm.max_steps; ++step) {
    if (t >= prm.t_final - 1e-12 * prm.t_final) {
      trace.termination = Termination::reached_t_final;
      return trace;
    }
    SeriesTerms st = solver.compute(model, u);
    FlowEvaluator flow = make_flow(st.terms, prm.r, prm.s, prm.n_laguerre,
                                   prm.pade_rank_tol);
    PartialSumRadius seed = partial_sum_radius(st.terms, prm.eps);
    double dt = seed.zero_highest_term ? prev_dt : seed.value;
    dt = std::min(dt, prm.t_final - t);

    auto try_step = [&](double trial, Vector& out_u, double& out_res) -> bool {
      try {
        out_u = flow.flow(trial);
        Vector dudt = flow.flow_derivative(trial);
        if (!detail::all_finite(out_u) || !detail::all_finite(dudt)) return false;
        out_res = res.eval(out_u, dudt);
        return std::isfinite(out_res);
      } catch (const PoleOnPath&) {
        return false;
      }
    };

    Vector u_new;
    double res_new = 0.0;
    // first trial: halve until the residual test passes
    Index halvings = 0;
    while (true) {
      if (try_step(dt, u_new, res_new) && res_new <= prm.eps) break;
      dt *= 0.5;
      if (++halvings > 40 || dt < 1e-12 * prm.t_final) {
        trace.termination = Termination::step_collapse;
        return trace;
      }
    }
    // growth loop: keep the last passing trial
    while (t + dt < prm.t_final - 1e-12 * prm.t_final) {
      double trial = std::min(dt * prm.growth, prm.t_final - t);
      Vector u_try;
      double res_try = 0.0;
      if (!try_step(trial, u_try, res_try) || res_try > prm.eps) break;
      dt = trial;
      u_new = std::move(u_try);
      res_new = res_try;
      if (trial >= prm.t_final - t - 1e-12 * prm.t_final) break;
    }
    t += dt;
    u = std::move(u_new);
    prev_dt = dt;
    trace.records.push_back({t, dt, res_new});
    if (prm.store_states) trace.states.push_back(u);
    trace.final_state = u;
  }
  trace.termination = Termination::max_steps;
  return trace;
}

/// Fixed-step driver: steps t_n = n dt, series recomputed from the current
/// state at every step; the residual is recorded at the end of each step and
/// at t = 0. Explosion (nonfinite state or residual > 1e3) terminates with
/// the table-style "x" outcome.
inline ContinuationTrace fixed_step_integrate(const RecurrenceModel& model,
                                              const Operators& reduced,
                                              const Vector& u0,
                                              const StabilizationPlan& plan,
                                              double dt, double t_final, Index m,
                                              Index r, Index s, Index n_laguerre,
                                              const ResidualOptions& ropts = {},
                                              const Operators* full = nullptr,
                                              const DenseMatrix* lumped_full = nullptr,
                                              bool store_states = false) {
  if (!(dt > 0.0)) throw BadConfig("fixed_step_integrate: dt must be positive");
  if (r + s != m - 1) throw BadConfig("fixed_step_integrate: r+s must equal m-1");
  ContinuationTrace trace;
  detail::ResidualEngine res{&model, &reduced, full, lumped_full, ropts};
  Vector u = u0;
  trace.final_state = u;
  TermSolver solver(reduced, plan, m);
  const Index n_steps = static_cast<Index>(std::llround(t_final / dt));
  double t = 0.0;
  for (Index n = 0; n < n_steps; ++n) {
    SeriesTerms st;
    try {
      st = solver.compute(model, u);
    } catch (const NonFinite&) {
      trace.termination = Termination::non_finite;
      return trace;
    }
    double step = std::min(dt, t_final - t);
    try {
      FlowEvaluator flow = make_flow(st.terms, r, s, n_laguerre);
      if (n == 0) {
        Vector du0 = flow.flow_derivative(0.0);
        trace.records.push_back({0.0, 0.0, res.eval(u, du0)});
      }
      Vector u_new = flow.flow(step);
      Vector dudt = flow.flow_derivative(step);
      if (!detail::all_finite(u_new) || !detail::all_finite(dudt)) {
        trace.termination = Termination::non_finite;
        return trace;
      }
      const double r_val = res.eval(u_new, dudt);
      t += step;
      u = std::move(u_new);
      trace.records.push_back({t, step, r_val});
      if (store_states) trace.states.push_back(u);
      trace.final_state = u;
      if (!std::isfinite(r_val)) {
        trace.termination = Termination::non_finite;
        return trace;
      }
      if (r_val > 1e3) {
        trace.termination = Termination::residual_explosion;
        return trace;
      }
    } catch (const PoleOnPath&) {
      trace.termination = Termination::residual_explosion;
      return trace;
    }
  }
  trace.termination = Termination::reached_t_final;
  return trace;
}

} // namespace resumfem

#endif
