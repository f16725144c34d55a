#pragma once

// Internal N-dimensional adaptive stepper shared by the integration and
// verification translation units. Not part of the public API.

#include <functional>
#include <limits>
#include <vector>

#include "majorana/integrate.hpp"

namespace majorana::detail {

struct System {
    int dim = 1;
    std::function<void(double, const double*, double*)> f;
    std::function<double(double, const double*)> denom;  // may be empty
    std::function<bool(double, const double*)> singular; // may be empty
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
};

struct NPoint {
    double t;
    std::vector<double> w;
    std::vector<double> f;
};

struct NResult {
    std::vector<NPoint> points;
    StopReason reason = StopReason::reached_end;
};

// Dormand-Prince 5(4) with FSAL, denominator sign-change stop localization.
NResult rk45(const System& sys, double t0, std::vector<double> w0, double t_end,
             const SolverConfig& cfg);

void hermite(const NPoint& p0, const NPoint& p1, double t, double* out, int dim);
void hermite_deriv(const NPoint& p0, const NPoint& p1, double t, double* out, int dim);

// Dense evaluation over the accepted points of an N-dim result.
void eval_result(const NResult& r, double t, double* out, int dim);

} // namespace majorana::detail
