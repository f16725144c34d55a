#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "majorana/reduction.hpp"

namespace majorana {

struct SolverConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double h_init = 1e-4;
    double h_min = 1e-14;
    long max_steps = 1000000;
    double eps_sing = 1e-10;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;

    void validate() const; // throws bad_input
};

enum class StopReason { reached_end, singular_stop };

// One accepted step of a scalar integration, with the derivative stored for
// cubic Hermite dense output.
struct OdePoint {
    double t, w, dw;
};

struct IntegrationResult {
    std::vector<OdePoint> points;
    StopReason reason = StopReason::reached_end;

    double t_end() const { return points.back().t; }
    double w_end() const { return points.back().w; }
    // Hermite interpolation between accepted steps; t must lie inside the
    // covered range.
    double eval_at(double t) const;
};

// Adaptive embedded Runge-Kutta 5(4) integration of an explicit reduced
// equation. Direction follows sign(t_end - t0). Stops early (reason =
// singular_stop, last valid sample kept) when the defining denominator
// changes sign or enters the eps_sing guard band; the stop point is
// localized by bisection.
IntegrationResult integrate_explicit(const ReducedODE& ode, double t0, double w0, double t_end,
                                     const SolverConfig& cfg);

// Same stepper for implicit residual(t, w, wdot) = 0: each stage evaluation
// solves for wdot by Newton with a finite-difference derivative, falling
// back to bisection on a bracket expanded geometrically from the previous
// wdot. Throws root_not_found when no bracket appears within 10 expansions.
IntegrationResult integrate_implicit(const ReducedODE& ode, double t0, double w0, double t_end,
                                     const SolverConfig& cfg);

// Fixed-step classical RK4, diagnostic only (used to measure convergence
// order in tests).
std::vector<std::pair<double, double>> integrate_rk4_fixed(const ReducedODE& ode, double t0,
                                                           double w0, double t_end, int n_steps);

struct TrajectorySample {
    double t, w, y, x;
};

// Sampled parametric solution of the original second-order equation:
// x = z(t) y^c holds at every sample by construction.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    VariableKind kind = VariableKind::u;
    double c = 0.0;
    std::string gauge_name;
    std::string method;
    bool forward = true;
    StopReason reason = StopReason::reached_end;
    GaugeFunction gauge;
    std::function<double(double)> to_v;

    std::size_t size() const { return samples.size(); }
    // dy/dx at sample i, computed as v * y^(1-c) from the reduced variable.
    double slope(std::size_t i) const;
};

// Integrates the augmented system {du/dt = f(t,u), dy/dt = u y} jointly and
// reconstructs x = z(t) y^c. grid > 0 resamples onto a uniform t-grid of
// that many points via dense output.
Trajectory reconstruct_majorana(const ReducedODE& ode, double t0, double u0, double y0,
                                double t_end, const SolverConfig& cfg, int grid = 0);

// Auxiliary-variable reconstruction {dv/dt = f(t,v), dy/dt = y v zdot/(1 - c v z)};
// for kind v_tilde the slope variable is recovered through ode.to_v first.
Trajectory reconstruct_aux(const ReducedODE& ode, double t0, double v0, double y0,
                           double t_end, const SolverConfig& cfg, int grid = 0);

} // namespace majorana
