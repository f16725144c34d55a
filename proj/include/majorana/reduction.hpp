#pragma once

#include <functional>
#include <string>

#include "majorana/gauges.hpp"
#include "majorana/scaling.hpp"

namespace majorana {

// Values of the Abel coefficients alpha + beta u + gamma u^2 + delta u^3
// at one parameter value t.
struct AbelCoefficients {
    double alpha, beta, gamma, delta;
};

enum class VariableKind { u, v, v_tilde };
enum class ReducedForm { explicit_rhs, implicit_residual };

// First-order equation produced by the order reduction, either explicit
// dw/dt = rhs(t, w) or implicit residual(t, w, wdot) = 0. denom is the
// defining denominator whose zero set is the singular locus; singular()
// is true exactly where |denom| falls within eps_sing of zero.
struct ReducedODE {
    ReducedForm form = ReducedForm::explicit_rhs;
    std::function<double(double, double)> rhs;
    std::function<double(double, double, double)> residual;
    std::function<double(double, double)> denom;    // may be empty
    std::function<bool(double, double)> singular;   // may be empty
    double c = 0.0;
    GaugeFunction gauge;
    VariableKind kind = VariableKind::u;
    double t_lo = 0.0; // open t-interval the equation may be integrated in
    double t_hi = 0.0;
    std::function<double(double)> to_v; // reduced variable -> slope variable v
};

// Relative guard for reduction denominators.
inline constexpr double default_eps_sing = 1e-10;

// Abel coefficients of the reduced Emden-Fowler equation
//   alpha = z^a zdot^2
//   beta  = 3c z^(a+1) zdot + zddot/zdot
//   gamma = 3c^2 z^(a+2) + 2c - 1
//   delta = c^3 z^(a+3)/zdot + c(c-1) z/zdot
// (beta carries zddot/zdot; see docs/derivation_notes.md for the
// re-derivation and the closed-form consistency check that pins it down).
AbelCoefficients abel_coefficients(EmdenFowlerParams params, const GaugeFunction& gauge, double t);

// alpha + beta u + gamma u^2 + delta u^3 at (t, u).
double abel_rhs(double t, double u, EmdenFowlerParams params, const GaugeFunction& gauge);

// Auxiliary-variable form dv/dt = zdot [z^a - (1-c) v^2] / (1 - c v z).
double aux_rhs(double t, double v, EmdenFowlerParams params, const GaugeFunction& gauge,
               double eps_sing = default_eps_sing);

// Builders wrapping the two explicit right-hand sides.
ReducedODE abel_reduced(EmdenFowlerParams params, GaugeFunction gauge);
ReducedODE aux_reduced(EmdenFowlerParams params, GaugeFunction gauge,
                       double eps_sing = default_eps_sing);

// Thomas-Fermi closed form with the (12(1-t))^(2/3) gauge:
//   du/dt = 16/(3(1-t)) + (8 + 1/(3(1-t))) u + (7/3 - 4t) u^2 - (2/3) t(1-t) u^3
ReducedODE tf_abel_reduced();

// Thomas-Fermi auxiliary form with the 12^(2/3) t^2 gauge, in the rescaled
// variable vt = -4*12^(-1/3) v:
//   dvt/dt = 8 (t vt^2 - 1) / (1 - t^2 vt)
ReducedODE tf_aux_reduced(double eps_sing = default_eps_sing);
// v from vt for the rescaled Thomas-Fermi variable.
double tf_v_from_vtilde(double vtilde);

// Implicit reduced residual F(z, 1, v1, v2) with
//   v1 = u / (zdot + c u z)
//   v2 = (zdot udot - zddot u + (1-2c) zdot u^2 + c(1-c) z u^3) / (zdot + c u z)^3
double generic_reduced_residual(const ResidualODE2& f, ScalingLaw law, const GaugeFunction& gauge,
                                double t, double u, double udot,
                                double eps_sing = default_eps_sing);

// Auxiliary-variable implicit residual F(z, 1, v, (1 - c v z) vdot/zdot + (1-c) v^2).
double aux_reduced_residual(const ResidualODE2& f, ScalingLaw law, const GaugeFunction& gauge,
                            double t, double v, double vdot);

ReducedODE generic_reduced(ResidualODE2 f, ScalingLaw law, GaugeFunction gauge,
                           double eps_sing = default_eps_sing);
ReducedODE aux_generic_reduced(ResidualODE2 f, ScalingLaw law, GaugeFunction gauge,
                               double eps_sing = default_eps_sing);

// Slope variable v = y' y^(c-1) at (t, w) for any reduced-variable kind.
double slope_variable(const ReducedODE& ode, double t, double w);

} // namespace majorana
