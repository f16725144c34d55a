#pragma once

#include <vector>

namespace majorana {

// Truncated power series sum a_k (t - center)^k.
struct PowerSeries {
    double center = 0.0;
    std::vector<double> coeffs; // a_0 .. a_N

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Polynomial in two variables, coeff[i][j] multiplying t^i w^j.
struct BivariatePoly {
    std::vector<std::vector<double>> coeff;

    double eval(double t, double w) const;
    int deg_t() const { return static_cast<int>(coeff.size()) - 1; }
    int deg_w() const;
};

// Formal series solution of P(t, w) w' = Q(t, w) through (t0, w0), computed
// order by order: a_k is fixed by the (t-t0)^(k-1) coefficient, whose a_k
// factor is k P(t0, w0). Requires P(t0, w0) != 0 (singular_expansion_point
// otherwise); aborts with overflow_detected when |a_k| > 1e300.
PowerSeries series_solve_rational(const BivariatePoly& P, const BivariatePoly& Q,
                                  double t0, double w0, int N);

// Horner evaluation at (t - center).
double series_eval(const PowerSeries& ps, double t);

// The series of P w' - Q with w substituted by ps, truncated at ps.order().
// For a series produced by series_solve_rational the coefficients through
// order N-1 vanish; used as the construction check.
PowerSeries series_ode_residual(const BivariatePoly& P, const BivariatePoly& Q,
                                const PowerSeries& ps);

// P = 1 - t^2 w and Q = 8 t w^2 - 8 of the reduced Thomas-Fermi equation
// dw/dt = 8(t w^2 - 1)/(1 - t^2 w).
BivariatePoly tf_aux_poly_P();
BivariatePoly tf_aux_poly_Q();

// Series in s = 1 - t of the reduced Thomas-Fermi solution through
// (t, vt) = (1, 0): vt(s) = 8 s + 32 s^2 + ... The point is regular
// (denominator = 1 there), so the ordinary recurrence applies after
// recentering.
PowerSeries tf_boundary_series_at_one(int N);

// Crude convergence-radius estimate from the tail coefficient ratios.
double series_radius_estimate(const PowerSeries& ps);

} // namespace majorana
