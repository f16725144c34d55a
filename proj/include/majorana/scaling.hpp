#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace majorana {

// A second-order ODE given as an evaluatable residual F(x, y, y', y'') = 0
// together with its domain. evaluate must be deterministic and finite on
// the domain.
struct ResidualODE2 {
    std::function<double(double, double, double, double)> evaluate;
    std::function<bool(double, double)> in_domain; // (x, y)
    std::string description;
};

struct EmdenFowlerParams {
    double a = 0.0;
    double b = 0.0;
};

// Scaling exponent c of the one-parameter family x -> alpha^c x, y -> alpha y,
// plus the homogeneity degree k the residual picks up under it (the zero set
// is preserved for any k).
struct ScalingLaw {
    double c = 0.0;
    double k = 0.0;
};

struct ProbePoint {
    double x, y, yp, ypp;
};

// c = (1-b)/(a+2), k = 1-2c. Throws degenerate_exponent for a = -2.
ScalingLaw emden_fowler_exponent(EmdenFowlerParams params);

// Residual y'' - x^a y^b with domain x > 0, y > 0.
ResidualODE2 emden_fowler_residual(EmdenFowlerParams params);
// The a = -1/2, b = 3/2 case.
ResidualODE2 thomas_fermi_residual();

// Deterministic quasi-random probe set: Halton points in
// x, y in [0.5, 2], y', y'' in [-2, 2], filtered by the residual domain.
std::vector<ProbePoint> default_probe_points(const ResidualODE2& f, int n = 20);
// {0.5, 2.0, 3.0}
std::vector<double> default_alphas();

struct DefectFit {
    double defect = 0.0; // max relative deviation of the ratios from alpha^k
    double k = 0.0;      // degree fitted by least squares over log alpha
};

// Scales every probe point by each alpha, forms the ratios
// F(scaled)/F(unscaled), fits one degree k in log space and returns the
// worst relative deviation from alpha^k. Near-zero output certifies that
// the zero set of F is invariant under the scaling with exponent c.
// Points where F vanishes are skipped (error only if all vanish).
DefectFit invariance_fit(const ResidualODE2& f, double c,
                         std::span<const ProbePoint> points,
                         std::span<const double> alphas);
double invariance_defect(const ResidualODE2& f, double c,
                         std::span<const ProbePoint> points,
                         std::span<const double> alphas);

// Minimizes the defect over c in (c_lo, c_hi) by iterated grid refinement.
// Succeeds only if the minimized defect is below threshold, otherwise
// throws no_invariant_exponent.
ScalingLaw estimate_exponent(const ResidualODE2& f, double c_lo, double c_hi,
                             std::span<const ProbePoint> points,
                             std::span<const double> alphas,
                             double threshold = 1e-8);

// Serial reference implementations of the kernels above (identical
// arithmetic, plain loops); kept for testing the OpenMP paths.
namespace serial {
DefectFit invariance_fit(const ResidualODE2& f, double c,
                         std::span<const ProbePoint> points,
                         std::span<const double> alphas);
double invariance_defect(const ResidualODE2& f, double c,
                         std::span<const ProbePoint> points,
                         std::span<const double> alphas);
ScalingLaw estimate_exponent(const ResidualODE2& f, double c_lo, double c_hi,
                             std::span<const ProbePoint> points,
                             std::span<const double> alphas,
                             double threshold = 1e-8);
} // namespace serial

} // namespace majorana
