#include "majorana/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "majorana/error.hpp"
#include "majorana/parallel.hpp"
#include "majorana/series.hpp"
#include "stepper.hpp"

namespace majorana {

namespace {

constexpr double kTfX0 = 1e-6;   // desingularized start of direct Thomas-Fermi runs
constexpr double kTfXMax = 50.0; // far end used to classify shooting trials
constexpr double kYFloor = 1e-12;

bool is_integer(double v) { return v == std::floor(v); }

// --- monotone cubic (Fritsch-Carlson) interpolation -------------------------

struct Pchip {
    std::vector<double> x, y, m;

    Pchip(std::span<const double> xs, std::span<const double> ys) {
        const std::size_t n = xs.size();
        if (n < 2 || ys.size() != n) fail(errc::bad_input, "need >= 2 samples to interpolate");
        bool ascending = xs[1] > xs[0];
        x.assign(xs.begin(), xs.end());
        y.assign(ys.begin(), ys.end());
        if (!ascending) {
            std::reverse(x.begin(), x.end());
            std::reverse(y.begin(), y.end());
        }
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x[i + 1] > x[i])) fail(errc::non_monotone_x, "x must be strictly monotone");

        m.resize(n);
        if (n == 2) {
            m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
            return;
        }
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x[i + 1] - x[i];
            d[i] = (y[i + 1] - y[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (s * d0 <= 0.0) return 0.0;
            if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return s;
        };
        m[0] = endpoint(h[0], h[1], d[0], d[1]);
        m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }

    double operator()(double q) const {
        std::size_t lo = 0, hi = x.size() - 1;
        if (q <= x.front()) {
            hi = 1;
        } else if (q >= x.back()) {
            lo = x.size() - 2;
        } else {
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (x[mid] <= q)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        const double h = x[lo + 1] - x[lo];
        const double th = (q - x[lo]) / h;
        const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
        const double h10 = th * (1 - th) * (1 - th);
        const double h01 = th * th * (3 - 2 * th);
        const double h11 = th * th * (th - 1);
        return h00 * y[lo] + h * h10 * m[lo] + h01 * y[lo + 1] + h * h11 * m[lo + 1];
    }
};

double residual_impl(const ResidualODE2& f, std::span<const double> xs, std::span<const double> ys,
                     bool parallel) {
    const std::size_t n = xs.size();
    if (n != ys.size()) fail(errc::bad_input, "x/y sample counts differ");
    if (n < 5) fail(errc::bad_input, "residual check needs at least 5 samples");
    const double dir = xs[1] - xs[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
        if ((xs[i + 1] - xs[i]) * dir <= 0.0)
            fail(errc::non_monotone_x, "x must be strictly monotone along the curve");

    std::vector<double> r(n, 0.0);
    auto kernel = [&](std::ptrdiff_t idx) {
        const std::size_t i = static_cast<std::size_t>(idx) + 1;
        const double h1 = xs[i] - xs[i - 1];
        const double h2 = xs[i + 1] - xs[i];
        const double den = h1 * h2 * (h1 + h2);
        const double yp =
            (ys[i + 1] * h1 * h1 - ys[i - 1] * h2 * h2 + ys[i] * (h2 * h2 - h1 * h1)) / den;
        const double ypp = 2.0 * (ys[i - 1] * h2 - ys[i] * (h1 + h2) + ys[i + 1] * h1) / den;
        if (!f.in_domain(xs[i], ys[i])) {
            r[i] = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        // normalized by the local curvature scale
        r[i] = std::abs(f.evaluate(xs[i], ys[i], yp, ypp)) / std::max(1.0, std::abs(ypp));
    };
    if (parallel)
        parallel_for(static_cast<std::ptrdiff_t>(n - 2), kernel);
    else
        serial_for(static_cast<std::ptrdiff_t>(n - 2), kernel);

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::isnan(r[i])) fail(errc::domain_violation, "curve sample outside residual domain");
        worst = std::max(worst, r[i]);
    }
    return worst;
}

double compare_impl(std::span<const double> ax, std::span<const double> ay,
                    std::span<const double> bx, std::span<const double> by, double x_lo,
                    double x_hi, int grid, bool parallel) {
    if (!(x_lo < x_hi)) fail(errc::bad_input, "empty comparison range");
    if (grid < 2) fail(errc::bad_input, "grid must have at least 2 points");
    auto covers = [&](std::span<const double> xs) {
        if (xs.size() < 2) return false;
        const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
        const double slack = 1e-9 * (x_hi - x_lo);
        return *mn <= x_lo + slack && *mx >= x_hi - slack;
    };
    if (!covers(ax) || !covers(bx))
        fail(errc::range_not_covered, "both curves must cover the comparison range");

    const Pchip fa(ax, ay), fb(bx, by);
    std::vector<double> dev(grid, 0.0);
    auto kernel = [&](std::ptrdiff_t i) {
        const double q = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (grid - 1);
        const double va = fa(q), vb = fb(q);
        dev[i] = std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1e-300});
    };
    if (parallel)
        parallel_for(grid, kernel);
    else
        serial_for(grid, kernel);
    double worst = 0.0;
    for (double d : dev) worst = std::max(worst, d);
    return worst;
}

detail::System emden_fowler_system(EmdenFowlerParams params) {
    const double a = params.a, b = params.b;
    detail::System sys;
    sys.dim = 2;
    sys.f = [a, b](double x, const double* w, double* out) {
        out[0] = w[1];
        out[1] = std::pow(x, a) * std::pow(w[0], b);
    };
    if (!is_integer(b) || b < 0.0) {
        // y must stay positive; localize the exit by sign change of y - floor
        sys.denom = [](double, const double* w) { return w[0] - kYFloor; };
        sys.singular = [](double, const double* w) { return w[0] <= kYFloor; };
    }
    if (!is_integer(a) || a < 0.0) sys.t_lo = 0.0;
    return sys;
}

struct TfStart {
    double y, yp;
};

// Local behavior y = 1 + s x + (4/3) x^(3/2) + ... of the Thomas-Fermi
// solution near x = 0; both the value and the derivative of the x^(3/2)
// term matter at the desingularized start.
TfStart tf_start(double slope, double x0) {
    return {1.0 + slope * x0 + (4.0 / 3.0) * std::pow(x0, 1.5), slope + 2.0 * std::sqrt(x0)};
}

DirectCurve pack_direct(const detail::NResult& r, EmdenFowlerParams params,
                        const std::string& method) {
    DirectCurve curve;
    curve.params = params;
    curve.method = method;
    curve.domain_exit = r.reason == StopReason::singular_stop;
    curve.samples.reserve(r.points.size());
    for (const auto& p : r.points) curve.samples.push_back({p.t, p.w[0], p.w[1]});
    return curve;
}

} // namespace

DirectCurve direct_emden_fowler(EmdenFowlerParams params, double x0, double y0, double yp0,
                                double x_end, const SolverConfig& cfg) {
    if (x_end == x0) fail(errc::bad_input, "x_end must differ from x0");
    if ((!is_integer(params.a) || params.a < 0.0) && !(x0 > 0.0))
        fail(errc::bad_input, "x0 must be positive for this exponent a");
    if (!is_integer(params.b) && !(y0 > 0.0))
        fail(errc::bad_input, "y0 must be positive for fractional b");
    detail::NResult r = detail::rk45(emden_fowler_system(params), x0, {y0, yp0}, x_end, cfg);
    return pack_direct(r, params, "direct");
}

double residual_along_curve(const ResidualODE2& f, std::span<const double> xs,
                            std::span<const double> ys) {
    return residual_impl(f, xs, ys, true);
}

double residual_along_curve(const ResidualODE2& f, const Trajectory& traj) {
    std::vector<double> xs, ys;
    xs.reserve(traj.size());
    ys.reserve(traj.size());
    for (const auto& s : traj.samples) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    return residual_impl(f, xs, ys, true);
}

double compare_curves(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> bx, std::span<const double> by, double x_lo,
                      double x_hi, int grid) {
    return compare_impl(ax, ay, bx, by, x_lo, x_hi, grid, true);
}

namespace {
void split_xy(const Trajectory& t, std::vector<double>& xs, std::vector<double>& ys) {
    for (const auto& s : t.samples) {
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
}
} // namespace

double compare_curves(const Trajectory& a, const DirectCurve& b, double x_lo, double x_hi,
                      int grid) {
    std::vector<double> ax, ay, bx, by;
    split_xy(a, ax, ay);
    for (const auto& s : b.samples) {
        bx.push_back(s.x);
        by.push_back(s.y);
    }
    return compare_impl(ax, ay, bx, by, x_lo, x_hi, grid, true);
}

double compare_curves(const Trajectory& a, const Trajectory& b, double x_lo, double x_hi,
                      int grid) {
    std::vector<double> ax, ay, bx, by;
    split_xy(a, ax, ay);
    split_xy(b, bx, by);
    return compare_impl(ax, ay, bx, by, x_lo, x_hi, grid, true);
}

namespace serial {

double residual_along_curve(const ResidualODE2& f, std::span<const double> xs,
                            std::span<const double> ys) {
    return residual_impl(f, xs, ys, false);
}

double compare_curves(std::span<const double> ax, std::span<const double> ay,
                      std::span<const double> bx, std::span<const double> by, double x_lo,
                      double x_hi, int grid) {
    return compare_impl(ax, ay, bx, by, x_lo, x_hi, grid, false);
}

} // namespace serial

int tf_shooting_classify(double slope, const SolverConfig& cfg) {
    const TfStart s = tf_start(slope, kTfX0);
    DirectCurve c = direct_emden_fowler({-0.5, 1.5}, kTfX0, s.y, s.yp, kTfXMax, cfg);
    if (c.domain_exit) return -1; // hit y = 0: slope too steep
    for (const auto& p : c.samples)
        if (p.yp > 0.0) return +1; // turned upward: slope too shallow
    // neither event fired by x_max; compare against the decaying envelope
    return c.samples.back().y > 144.0 / (kTfXMax * kTfXMax * kTfXMax) ? +1 : -1;
}

double tf_initial_slope_shooting(const SolverConfig& cfg, double slope_tol) {
    double lo = -2.0, hi = -1.0;
    if (tf_shooting_classify(lo, cfg) != -1 || tf_shooting_classify(hi, cfg) != +1)
        fail(errc::bracket_lost, "shooting endpoints classify identically");
    while (hi - lo > slope_tol) {
        const double mid = 0.5 * (lo + hi);
        if (tf_shooting_classify(mid, cfg) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double tf_initial_slope_reduced(const SolverConfig& cfg, double boundary_s) {
    if (!(boundary_s > 0.0 && boundary_s < 0.1))
        fail(errc::bad_input, "boundary offset must be small and positive");
    const PowerSeries bs = tf_boundary_series_at_one(8);
    const double vt0 = series_eval(bs, boundary_s);
    const ReducedODE ode = tf_aux_reduced(cfg.eps_sing);
    IntegrationResult r = integrate_explicit(ode, 1.0 - boundary_s, vt0, 0.0, cfg);
    if (r.reason == StopReason::singular_stop)
        fail(errc::singularity_stop,
             "reduced equation hit its singular set; not the decaying branch");
    return tf_v_from_vtilde(r.w_end());
}

double tf_initial_slope_series(const SolverConfig& cfg, int order) {
    if (order < 4) fail(errc::bad_input, "series order too low for the marching route");
    const BivariatePoly P = tf_aux_poly_P();
    const BivariatePoly Q = tf_aux_poly_Q();

    const double s0 = 1e-7;
    double t = 1.0 - s0;
    double w = series_eval(tf_boundary_series_at_one(order), s0);

    // analytic continuation toward t = 0 by recentered series, hop length a
    // fixed fraction of the estimated convergence radius
    for (int hop = 0; hop < 500; ++hop) {
        if (t <= 0.0) break;
        const PowerSeries ps = series_solve_rational(P, Q, t, w, order);
        double radius = series_radius_estimate(ps);
        if (!std::isfinite(radius)) radius = 4.0 * t;
        const double step = std::min(0.25 * radius, t);
        if (!(step > 0.0))
            fail(errc::singular_expansion_point, "series march stalled before t = 0");
        w = series_eval(ps, t - step);
        t -= step;
        if (t < 1e-15) t = 0.0;
    }
    if (t > 0.0) fail(errc::max_steps_exceeded, "series march did not reach t = 0");
    (void)cfg;
    return tf_v_from_vtilde(w);
}

Trajectory tf_reduced_profile(const SolverConfig& cfg, double x_cover) {
    const double boundary_s = 1e-6;
    const PowerSeries bs = tf_boundary_series_at_one(8);
    const double vt_start = series_eval(bs, boundary_s);
    const ReducedODE ode = tf_aux_reduced(cfg.eps_sing);

    // sweep down to the x = 0 end first; y is normalized to 1 there
    const double t_near = 1e-6;
    IntegrationResult down = integrate_explicit(ode, 1.0 - boundary_s, vt_start, t_near, cfg);
    if (down.reason == StopReason::singular_stop)
        fail(errc::singularity_stop, "reduced equation hit its singular set");
    const double vt_near = down.w_end();

    for (double delta = 1e-3; delta >= 1e-8; delta *= 0.1) {
        Trajectory traj = reconstruct_aux(ode, t_near, vt_near, 1.0, 1.0 - delta, cfg);
        double xmax = 0.0;
        for (const auto& s : traj.samples) xmax = std::max(xmax, s.x);
        if (xmax >= x_cover) return traj;
    }
    fail(errc::range_not_covered, "profile did not reach the requested x range");
}

DirectCurve tf_direct_profile(const SolverConfig& cfg, double x_end, double slope) {
    if (std::isnan(slope)) slope = tf_initial_slope_shooting(cfg, 1e-6);
    const TfStart s = tf_start(slope, kTfX0);
    DirectCurve c = direct_emden_fowler({-0.5, 1.5}, kTfX0, s.y, s.yp, x_end, cfg);
    c.method = "shooting";
    return c;
}

} // namespace majorana
