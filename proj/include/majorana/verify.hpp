#pragma once

#include <span>
#include <string>
#include <vector>

#include "majorana/integrate.hpp"
#include "majorana/scaling.hpp"

namespace majorana {

struct DirectSample {
    double x, y, yp;
};

// Solution of y'' = x^a y^b obtained by direct integration in x; the oracle
// the reduced pipeline is checked against.
struct DirectCurve {
    std::vector<DirectSample> samples;
    EmdenFowlerParams params;
    std::string method;
    bool domain_exit = false; // y reached 0 with fractional b; curve truncated

    std::size_t size() const { return samples.size(); }
};

DirectCurve direct_emden_fowler(EmdenFowlerParams params, double x0, double y0, double yp0,
                                double x_end, const SolverConfig& cfg);

// Max |F(x, y, y', y'')| over interior samples with y', y'' from centered
// finite differences in x, normalized by the local curvature scale
// max(1, |y''|). Decreases ~h^2 under refinement on exact solutions.
// Requires >= 5 samples and strictly monotone x.
double residual_along_curve(const ResidualODE2& f, std::span<const double> xs,
                            std::span<const double> ys);
double residual_along_curve(const ResidualODE2& f, const Trajectory& traj);

// Max relative deviation in y between two curves after monotone-cubic
// interpolation onto a common grid covering [x_lo, x_hi].
double compare_curves(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> bx, std::span<const double> by,
                      double x_lo, double x_hi, int grid = 512);
double compare_curves(const Trajectory& a, const DirectCurve& b, double x_lo, double x_hi,
                      int grid = 512);
double compare_curves(const Trajectory& a, const Trajectory& b, double x_lo, double x_hi,
                      int grid = 512);

namespace serial {
double residual_along_curve(const ResidualODE2& f, std::span<const double> xs,
                            std::span<const double> ys);
double compare_curves(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> bx, std::span<const double> by,
                      double x_lo, double x_hi, int grid = 512);
} // namespace serial

// Initial slope y'(0) of the Thomas-Fermi problem y(0) = 1, y(inf) = 0 by
// the reduced route: start on the boundary series of the reduced equation
// at s = 1 - t = boundary_s, integrate back to t = 0 and invert the
// variable changes (v = y' holds at the y = 1 normalization point).
double tf_initial_slope_reduced(const SolverConfig& cfg, double boundary_s = 1e-6);

// Same constant by classical shooting on the direct equation: bisection on
// y'(0) in [-2, -1], classifying each trial as hitting y = 0 or turning
// upward. This is the brute-force oracle.
double tf_initial_slope_shooting(const SolverConfig& cfg, double slope_tol = 1e-6);
// Classification of one trial slope: -1 hit zero, +1 turned upward.
int tf_shooting_classify(double slope, const SolverConfig& cfg);

// Semi-analytic route: march the series solution of the reduced equation
// from the t = 1 boundary down to t = 0 by repeated recentering (hop length
// a fixed fraction of the estimated convergence radius), then invert the
// variable changes as above.
double tf_initial_slope_series(const SolverConfig& cfg, int order = 30);

// Full parametric Thomas-Fermi solution curve (y(0) = 1 branch) from the
// reduced route; x spans (0, x beyond x_min_cover].
Trajectory tf_reduced_profile(const SolverConfig& cfg, double x_cover = 6.0);

// Direct-integration Thomas-Fermi curve at the shooting slope, covering
// (0, x_end].
DirectCurve tf_direct_profile(const SolverConfig& cfg, double x_end = 6.0);

} // namespace majorana
