#pragma once

#include <functional>
#include <string>
#include <vector>

namespace majorana {

// Parametrization function z(t) used in x = z(t) y^c, together with its
// first two t-derivatives and an open interval on which zdot != 0 and all
// reduction formulas are usable. Values are immutable once built and safe
// to share between threads.
struct GaugeFunction {
    std::function<double(double)> z;
    std::function<double(double)> zdot;
    std::function<double(double)> zddot;
    double t_lo = 0.0; // open interval (t_lo, t_hi)
    double t_hi = 0.0;
    std::string name;

    bool contains(double t) const { return t > t_lo && t < t_hi; }
    // Throws out_of_gauge_domain when t is not strictly inside the interval.
    void require_inside(double t) const;
};

// z(t) = t on (-inf, inf).
GaugeFunction gauge_identity();

// z(t) = (12(1-t))^(2/3) on (-inf, 1); evaluation at t >= 1 throws.
GaugeFunction gauge_tf_abel();

// z(t) = 12^(2/3) t^2 on (0, inf); z itself is defined at t = 0 but the
// interval excludes it since zdot(0) = 0.
GaugeFunction gauge_tf_aux();

// z(t) = k t^p on (0, inf) with analytic derivatives.
GaugeFunction gauge_power(double k, double p);

// Wrap user callables. Missing derivatives are synthesized by central
// finite differences (h = 1e-5, one Richardson level for zddot). Supplied
// derivatives are checked against finite differences at five interior
// points; zdot must be nonzero there.
GaugeFunction gauge_from_callables(std::function<double(double)> z,
                                   std::function<double(double)> zdot,
                                   std::function<double(double)> zddot,
                                   double t_lo, double t_hi,
                                   const std::string& name);

// Lookup by CLI name: "identity", "tf-abel", "tf-aux", "power:<k>:<p>".
GaugeFunction gauge_by_name(const std::string& name);
std::vector<std::string> gauge_names();

} // namespace majorana
