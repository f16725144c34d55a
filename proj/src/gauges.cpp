#include "majorana/gauges.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "majorana/error.hpp"

namespace majorana {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-6;
constexpr double inf = std::numeric_limits<double>::infinity();

double fd_first(const std::function<double(double)>& z, double t, double h) {
    return (z(t + h) - z(t - h)) / (2.0 * h);
}

double fd_second(const std::function<double(double)>& z, double t, double h) {
    // central second difference with one Richardson level
    auto d2 = [&](double hh) { return (z(t + hh) - 2.0 * z(t) + z(t - hh)) / (hh * hh); };
    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

// 5 interior check points; infinite interval ends are replaced by a unit
// window so construction-time checks stay finite.
std::vector<double> check_points(double lo, double hi) {
    double wlo = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi - 2.0 : -1.0);
    double whi = std::isfinite(hi) ? hi : (std::isfinite(lo) ? lo + 2.0 : 1.0);
    std::vector<double> pts;
    for (int i = 1; i <= 5; ++i) pts.push_back(wlo + (whi - wlo) * i / 6.0);
    return pts;
}

} // namespace

void GaugeFunction::require_inside(double t) const {
    if (!contains(t)) {
        std::ostringstream os;
        os << "t = " << t << " outside validity interval (" << t_lo << ", " << t_hi
           << ") of gauge '" << name << "'";
        fail(errc::out_of_gauge_domain, os.str());
    }
}

GaugeFunction gauge_identity() {
    GaugeFunction g;
    g.z = [](double t) { return t; };
    g.zdot = [](double) { return 1.0; };
    g.zddot = [](double) { return 0.0; };
    g.t_lo = -inf;
    g.t_hi = inf;
    g.name = "identity";
    return g;
}

GaugeFunction gauge_tf_abel() {
    // z = (12(1-t))^(2/3); the formula leaves the real domain at t >= 1.
    const double s = std::cbrt(144.0); // 12^(2/3)
    auto guard = [](double t) {
        if (t >= 1.0) fail(errc::out_of_gauge_domain, "tf-abel gauge requires t < 1");
    };
    GaugeFunction g;
    g.z = [s, guard](double t) {
        guard(t);
        return s * std::pow(1.0 - t, 2.0 / 3.0);
    };
    g.zdot = [s, guard](double t) {
        guard(t);
        return -(2.0 / 3.0) * s * std::pow(1.0 - t, -1.0 / 3.0);
    };
    g.zddot = [s, guard](double t) {
        guard(t);
        return -(2.0 / 9.0) * s * std::pow(1.0 - t, -4.0 / 3.0);
    };
    g.t_lo = -inf;
    g.t_hi = 1.0;
    g.name = "tf-abel";
    return g;
}

GaugeFunction gauge_tf_aux() {
    const double s = std::cbrt(144.0);
    GaugeFunction g;
    g.z = [s](double t) { return s * t * t; };
    g.zdot = [s](double t) { return 2.0 * s * t; };
    g.zddot = [s](double) { return 2.0 * s; };
    g.t_lo = 0.0; // zdot(0) = 0, so the interval is open at 0
    g.t_hi = inf;
    g.name = "tf-aux";
    return g;
}

GaugeFunction gauge_power(double k, double p) {
    if (k == 0.0 || p == 0.0)
        fail(errc::degenerate_gauge, "power gauge needs k != 0 and p != 0");
    GaugeFunction g;
    g.z = [k, p](double t) { return k * std::pow(t, p); };
    g.zdot = [k, p](double t) { return k * p * std::pow(t, p - 1.0); };
    g.zddot = [k, p](double t) { return k * p * (p - 1.0) * std::pow(t, p - 2.0); };
    g.t_lo = 0.0;
    g.t_hi = inf;
    std::ostringstream os;
    os << "power:" << k << ":" << p;
    g.name = os.str();
    return g;
}

GaugeFunction gauge_from_callables(std::function<double(double)> z,
                                   std::function<double(double)> zdot,
                                   std::function<double(double)> zddot,
                                   double t_lo, double t_hi, const std::string& name) {
    if (!z) fail(errc::bad_input, "gauge needs a z callable");
    if (!(t_lo < t_hi)) fail(errc::bad_input, "gauge interval must be non-degenerate");

    const auto pts = check_points(t_lo, t_hi);
    for (double t : pts) {
        if (!std::isfinite(z(t)))
            fail(errc::bad_input, "z not finite inside the stated interval");
    }

    auto fd1 = [z](double t) { return fd_first(z, t, kFdStep); };
    auto fd2 = [z](double t) { return fd_second(z, t, kFdStep); };

    for (double t : pts) {
        double d1 = fd1(t);
        if (std::abs(d1) < 1e-8 * std::max(1.0, std::abs(z(t))))
            fail(errc::degenerate_gauge, "zdot vanishes at an interior check point of '" + name + "'");
        if (zdot && std::abs(zdot(t) - d1) > kFdRelTol * std::max(1.0, std::abs(d1)))
            fail(errc::inconsistent_derivatives,
                 "supplied zdot disagrees with finite differences for '" + name + "'");
        if (zddot && std::abs(zddot(t) - fd2(t)) > kFdRelTol * std::max(1.0, std::abs(fd2(t))))
            fail(errc::inconsistent_derivatives,
                 "supplied zddot disagrees with finite differences for '" + name + "'");
    }

    GaugeFunction g;
    g.z = std::move(z);
    g.zdot = zdot ? std::move(zdot) : std::function<double(double)>(fd1);
    g.zddot = zddot ? std::move(zddot) : std::function<double(double)>(fd2);
    g.t_lo = t_lo;
    g.t_hi = t_hi;
    g.name = name;
    return g;
}

GaugeFunction gauge_by_name(const std::string& name) {
    if (name == "identity") return gauge_identity();
    if (name == "tf-abel") return gauge_tf_abel();
    if (name == "tf-aux") return gauge_tf_aux();
    if (name.rfind("power:", 0) == 0) {
        double k = 0.0, p = 0.0;
        char colon = 0;
        std::istringstream is(name.substr(6));
        if ((is >> k >> colon >> p) && colon == ':') return gauge_power(k, p);
        fail(errc::bad_input, "malformed power gauge '" + name + "', expected power:<k>:<p>");
    }
    std::string known;
    for (const auto& n : gauge_names()) known += (known.empty() ? "" : ", ") + n;
    fail(errc::bad_input, "unknown gauge '" + name + "', available: " + known);
}

std::vector<std::string> gauge_names() {
    return {"identity", "tf-abel", "tf-aux", "power:<k>:<p>"};
}

} // namespace majorana
