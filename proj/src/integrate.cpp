#include "majorana/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "majorana/error.hpp"
#include "stepper.hpp"

namespace majorana {

namespace detail {

namespace {
// Dormand-Prince 5(4) pair.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat, the embedded 4th-order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite_all(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}
} // namespace

void hermite(const NPoint& p0, const NPoint& p1, double t, double* out, int dim) {
    const double h = p1.t - p0.t;
    const double th = (t - p0.t) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    for (int d = 0; d < dim; ++d)
        out[d] = h00 * p0.w[d] + h * h10 * p0.f[d] + h01 * p1.w[d] + h * h11 * p1.f[d];
}

void hermite_deriv(const NPoint& p0, const NPoint& p1, double t, double* out, int dim) {
    const double h = p1.t - p0.t;
    const double th = (t - p0.t) / h;
    const double g00 = (6 * th * th - 6 * th) / h;
    const double g10 = 3 * th * th - 4 * th + 1;
    const double g01 = (6 * th - 6 * th * th) / h;
    const double g11 = 3 * th * th - 2 * th;
    for (int d = 0; d < dim; ++d)
        out[d] = g00 * p0.w[d] + g10 * p0.f[d] + g01 * p1.w[d] + g11 * p1.f[d];
}

void eval_result(const NResult& r, double t, double* out, int dim) {
    const auto& pts = r.points;
    if (pts.empty()) fail(errc::bad_input, "empty integration result");
    if (pts.size() == 1) {
        for (int d = 0; d < dim; ++d) out[d] = pts.front().w[d];
        return;
    }
    const double dir = pts.back().t >= pts.front().t ? 1.0 : -1.0;
    if ((t - pts.front().t) * dir < -1e-12 || (t - pts.back().t) * dir > 1e-12)
        fail(errc::bad_input, "evaluation point outside the integrated range");
    std::size_t lo = 0, hi = pts.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if ((t - pts[mid].t) * dir >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    hermite(pts[lo], pts[hi], t, out, dim);
}

NResult rk45(const System& sys, double t0, std::vector<double> w0, double t_end,
             const SolverConfig& cfg) {
    cfg.validate();
    const int n = sys.dim;
    if (!(t0 > sys.t_lo && t0 < sys.t_hi) || !(t_end >= sys.t_lo && t_end <= sys.t_hi)) {
        std::ostringstream os;
        os << "integration range [" << t0 << ", " << t_end << "] leaves the validity interval ("
           << sys.t_lo << ", " << sys.t_hi << ")";
        fail(errc::out_of_gauge_domain, os.str());
    }
    if (sys.singular && sys.singular(t0, w0.data()))
        fail(errc::singular_denominator, "initial point lies on the singular set");

    NResult res;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), wt(n), w5(n), err(n);

    auto eval = [&](double t, const std::vector<double>& w, std::vector<double>& out) {
        sys.f(t, w.data(), out.data());
    };

    double t = t0;
    std::vector<double> w = std::move(w0);
    eval(t, w, k1);
    res.points.push_back({t, w, k1});
    if (t_end == t0) return res;

    const double dir = t_end > t0 ? 1.0 : -1.0;
    double h = dir * std::min(cfg.h_init, std::abs(t_end - t0));
    long attempts = 0;

    while (dir * (t_end - t) > 0.0) {
        if (++attempts > cfg.max_steps)
            fail(errc::max_steps_exceeded, "step limit reached before t_end");
        if (std::abs(h) < cfg.h_min)
            fail(errc::step_underflow, "step size underflow (possible blow-up or singularity)");
        bool last = false;
        if (dir * (t + h - t_end) >= 0.0) {
            h = t_end - t;
            last = true;
        }

        bool ok = true;
        try {
            for (int d = 0; d < n; ++d) wt[d] = w[d] + h * a21 * k1[d];
            eval(t + c2 * h, wt, k2);
            for (int d = 0; d < n; ++d) wt[d] = w[d] + h * (a31 * k1[d] + a32 * k2[d]);
            eval(t + c3 * h, wt, k3);
            for (int d = 0; d < n; ++d)
                wt[d] = w[d] + h * (a41 * k1[d] + a42 * k2[d] + a43 * k3[d]);
            eval(t + c4 * h, wt, k4);
            for (int d = 0; d < n; ++d)
                wt[d] = w[d] + h * (a51 * k1[d] + a52 * k2[d] + a53 * k3[d] + a54 * k4[d]);
            eval(t + c5 * h, wt, k5);
            for (int d = 0; d < n; ++d)
                wt[d] = w[d] +
                        h * (a61 * k1[d] + a62 * k2[d] + a63 * k3[d] + a64 * k4[d] + a65 * k5[d]);
            eval(t + h, wt, k6);
            for (int d = 0; d < n; ++d)
                w5[d] = w[d] + h * (b1 * k1[d] + b3 * k3[d] + b4 * k4[d] + b5 * k5[d] + b6 * k6[d]);
            eval(t + h, w5, k7);
        } catch (const Error& e) {
            // a stage hit a singular denominator or left the gauge domain;
            // retry with a shorter step
            if (e.code() != errc::singular_denominator && e.code() != errc::out_of_gauge_domain)
                throw;
            ok = false;
        }
        if (ok && (!finite_all(w5) || !finite_all(k7))) ok = false;

        double err_norm = 0.0;
        if (ok) {
            for (int d = 0; d < n; ++d)
                err[d] = h * (e1 * k1[d] + e3 * k3[d] + e4 * k4[d] + e5 * k5[d] + e6 * k6[d] +
                              e7 * k7[d]);
            for (int d = 0; d < n; ++d) {
                const double sc =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(w[d]), std::abs(w5[d]));
                err_norm += (err[d] / sc) * (err[d] / sc);
            }
            err_norm = std::sqrt(err_norm / n);
            if (!std::isfinite(err_norm)) ok = false;
        }

        if (!ok) {
            h *= 0.25;
            continue;
        }

        if (err_norm <= 1.0) {
            const double t_new = t + h;
            NPoint next{t_new, w5, k7};

            if (sys.denom) {
                const double d0 = sys.denom(t, w.data());
                const double d1 = sys.denom(t_new, w5.data());
                const bool flipped = d0 * d1 < 0.0;
                const bool entered = sys.singular && sys.singular(t_new, w5.data());
                if (flipped || entered) {
                    // localize the stop point over the Hermite interpolant of
                    // this step, keeping the valid side
                    NPoint prev{t, w, k1};
                    double ta = t, tb = t_new;
                    std::vector<double> wa = w, wm(n);
                    for (int it = 0;
                         it < 200 && std::abs(tb - ta) > cfg.eps_sing * std::max(1.0, std::abs(ta));
                         ++it) {
                        const double tm = 0.5 * (ta + tb);
                        hermite(prev, next, tm, wm.data(), n);
                        const bool bad = sys.denom(tm, wm.data()) * d0 <= 0.0 ||
                                         (sys.singular && sys.singular(tm, wm.data()));
                        if (bad) {
                            tb = tm;
                        } else {
                            ta = tm;
                            wa = wm;
                        }
                    }
                    std::vector<double> fa(n);
                    hermite_deriv(prev, next, ta, fa.data(), n);
                    res.points.push_back({ta, wa, fa});
                    res.reason = StopReason::singular_stop;
                    return res;
                }
            } else if (sys.singular && sys.singular(t_new, w5.data())) {
                res.points.push_back(next);
                res.reason = StopReason::singular_stop;
                return res;
            }

            t = t_new;
            w.swap(w5);
            k1.swap(k7);
            res.points.push_back({t, w, k1});
            if (last && dir * (t_end - t) <= 0.0) break;
        }

        const double fac = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return res;
}

} // namespace detail

namespace {

using detail::NPoint;
using detail::NResult;
using detail::System;

System explicit_system(const ReducedODE& ode) {
    System sys;
    sys.dim = 1;
    sys.f = [&ode](double t, const double* w, double* out) { out[0] = ode.rhs(t, w[0]); };
    if (ode.denom) sys.denom = [&ode](double t, const double* w) { return ode.denom(t, w[0]); };
    if (ode.singular)
        sys.singular = [&ode](double t, const double* w) { return ode.singular(t, w[0]); };
    sys.t_lo = ode.t_lo;
    sys.t_hi = ode.t_hi;
    return sys;
}

// Resolve wdot from residual(t, w, wdot) = 0: Newton with a finite-difference
// slope from the warm start, falling back to bisection on a bracket expanded
// geometrically around the previous value.
double solve_stage(const ReducedODE& ode, double t, double w, double& warm,
                   const SolverConfig& cfg) {
    auto R = [&](double p) { return ode.residual(t, w, p); };

    double p = warm;
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        const double r = R(p);
        if (!std::isfinite(r)) break;
        const double dp = 1e-7 * std::max(1.0, std::abs(p));
        const double slope = (R(p + dp) - r) / dp;
        if (!std::isfinite(slope) || slope == 0.0) break;
        const double pn = p - r / slope;
        if (!std::isfinite(pn) || std::abs(pn) > 1e100) break;
        if (std::abs(pn - p) <= cfg.newton_tol * std::max(1.0, std::abs(pn))) {
            warm = pn;
            return pn;
        }
        p = pn;
    }

    double d = std::max(1.0, std::abs(warm));
    double lo = warm, hi = warm, rlo = 0.0, rhi = 0.0;
    bool bracketed = false;
    for (int k = 0; k < 10; ++k) {
        lo = warm - d;
        hi = warm + d;
        rlo = R(lo);
        rhi = R(hi);
        if (std::isfinite(rlo) && std::isfinite(rhi) && rlo * rhi <= 0.0) {
            bracketed = true;
            break;
        }
        d *= 2.0;
    }
    if (!bracketed)
        fail(errc::root_not_found, "no wdot bracket for the implicit residual after 10 expansions");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = R(mid);
        if (rm == 0.0 || std::abs(hi - lo) <= cfg.newton_tol * std::max(1.0, std::abs(mid))) {
            warm = mid;
            return mid;
        }
        if (rlo * rm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            rlo = rm;
        }
    }
    warm = 0.5 * (lo + hi);
    return warm;
}

System implicit_system(const ReducedODE& ode, const std::shared_ptr<double>& warm,
                       const SolverConfig& cfg) {
    System sys;
    sys.dim = 1;
    sys.f = [&ode, warm, cfg](double t, const double* w, double* out) {
        out[0] = solve_stage(ode, t, w[0], *warm, cfg);
    };
    if (ode.denom) sys.denom = [&ode](double t, const double* w) { return ode.denom(t, w[0]); };
    if (ode.singular)
        sys.singular = [&ode](double t, const double* w) { return ode.singular(t, w[0]); };
    sys.t_lo = ode.t_lo;
    sys.t_hi = ode.t_hi;
    return sys;
}

IntegrationResult pack_scalar(NResult&& r) {
    IntegrationResult out;
    out.reason = r.reason;
    out.points.reserve(r.points.size());
    for (const auto& p : r.points) out.points.push_back({p.t, p.w[0], p.f[0]});
    return out;
}

std::function<double(double, double)> reduced_rhs(const ReducedODE& ode,
                                                  const std::shared_ptr<double>& warm,
                                                  const SolverConfig& cfg) {
    if (ode.form == ReducedForm::explicit_rhs)
        return [&ode](double t, double w) { return ode.rhs(t, w); };
    return [&ode, warm, cfg](double t, double w) { return solve_stage(ode, t, w, *warm, cfg); };
}

Trajectory pack_trajectory(const ReducedODE& ode, const NResult& r, const std::string& method,
                           bool forward, int grid) {
    Trajectory traj;
    traj.kind = ode.kind;
    traj.c = ode.c;
    traj.gauge_name = ode.gauge.name;
    traj.method = method;
    traj.forward = forward;
    traj.reason = r.reason;
    traj.gauge = ode.gauge;
    traj.to_v = ode.to_v;

    auto push = [&](double t, double w, double y) {
        if (!(y > 0.0)) fail(errc::domain_exit, "reconstructed y left the positive range");
        const double x = ode.gauge.z(t) * std::pow(y, ode.c);
        traj.samples.push_back({t, w, y, x});
    };

    if (grid > 1 && r.points.size() > 1) {
        const double ta = r.points.front().t, tb = r.points.back().t;
        double out[2];
        for (int i = 0; i < grid; ++i) {
            const double t = ta + (tb - ta) * i / (grid - 1);
            detail::eval_result(r, t, out, 2);
            push(t, out[0], out[1]);
        }
    } else {
        for (const auto& p : r.points) push(p.t, p.w[0], p.w[1]);
    }
    return traj;
}

} // namespace

void SolverConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(h_init > 0) || !(h_min > 0) || !(eps_sing > 0) ||
        !(newton_tol > 0))
        fail(errc::bad_input, "solver tolerances must be positive");
    if (!(h_min < h_init)) fail(errc::bad_input, "h_min must be below h_init");
    if (max_steps < 1 || newton_max_iter < 1)
        fail(errc::bad_input, "iteration limits must be >= 1");
}

double IntegrationResult::eval_at(double t) const {
    if (points.empty()) fail(errc::bad_input, "empty integration result");
    if (points.size() == 1) return points.front().w;
    NResult r;
    r.points.reserve(points.size());
    for (const auto& p : points) r.points.push_back({p.t, {p.w}, {p.dw}});
    double out;
    detail::eval_result(r, t, &out, 1);
    return out;
}

IntegrationResult integrate_explicit(const ReducedODE& ode, double t0, double w0, double t_end,
                                     const SolverConfig& cfg) {
    if (ode.form != ReducedForm::explicit_rhs)
        fail(errc::bad_input, "integrate_explicit needs an explicit reduced equation");
    return pack_scalar(detail::rk45(explicit_system(ode), t0, {w0}, t_end, cfg));
}

IntegrationResult integrate_implicit(const ReducedODE& ode, double t0, double w0, double t_end,
                                     const SolverConfig& cfg) {
    if (ode.form != ReducedForm::implicit_residual)
        fail(errc::bad_input, "integrate_implicit needs an implicit reduced equation");
    auto warm = std::make_shared<double>(0.0);
    return pack_scalar(detail::rk45(implicit_system(ode, warm, cfg), t0, {w0}, t_end, cfg));
}

std::vector<std::pair<double, double>> integrate_rk4_fixed(const ReducedODE& ode, double t0,
                                                           double w0, double t_end, int n_steps) {
    if (ode.form != ReducedForm::explicit_rhs)
        fail(errc::bad_input, "fixed-step mode needs an explicit reduced equation");
    if (n_steps < 1) fail(errc::bad_input, "n_steps must be >= 1");
    std::vector<std::pair<double, double>> out;
    out.reserve(n_steps + 1);
    const double h = (t_end - t0) / n_steps;
    double t = t0, w = w0;
    out.emplace_back(t, w);
    for (int i = 0; i < n_steps; ++i) {
        const double q1 = ode.rhs(t, w);
        const double q2 = ode.rhs(t + 0.5 * h, w + 0.5 * h * q1);
        const double q3 = ode.rhs(t + 0.5 * h, w + 0.5 * h * q2);
        const double q4 = ode.rhs(t + h, w + h * q3);
        w += h / 6.0 * (q1 + 2 * q2 + 2 * q3 + q4);
        t = t0 + (i + 1) * h;
        out.emplace_back(t, w);
    }
    return out;
}

double Trajectory::slope(std::size_t i) const {
    const TrajectorySample& s = samples.at(i);
    double v;
    if (kind == VariableKind::u) {
        const double den = gauge.zdot(s.t) + c * s.w * gauge.z(s.t);
        if (den == 0.0) fail(errc::singular_denominator, "chart denominator vanishes");
        v = s.w / den;
    } else {
        v = to_v ? to_v(s.w) : s.w;
    }
    return v * std::pow(s.y, 1.0 - c);
}

Trajectory reconstruct_majorana(const ReducedODE& ode, double t0, double u0, double y0,
                                double t_end, const SolverConfig& cfg, int grid) {
    if (ode.kind != VariableKind::u)
        fail(errc::bad_input, "reconstruct_majorana needs a u-variable reduced equation");
    if (!(y0 > 0.0)) fail(errc::bad_input, "y0 must be positive");
    ode.gauge.require_inside(t0);

    auto warm = std::make_shared<double>(0.0);
    auto wdot = reduced_rhs(ode, warm, cfg);

    System sys;
    sys.dim = 2;
    sys.f = [&wdot](double t, const double* w, double* out) {
        out[0] = wdot(t, w[0]);
        out[1] = w[0] * w[1]; // dy/dt = u y
    };
    if (ode.denom) sys.denom = [&ode](double t, const double* w) { return ode.denom(t, w[0]); };
    sys.singular = [&ode](double t, const double* w) {
        if (w[1] <= 0.0) return true;
        return ode.singular ? ode.singular(t, w[0]) : false;
    };
    sys.t_lo = std::max(ode.t_lo, ode.gauge.t_lo);
    sys.t_hi = std::min(ode.t_hi, ode.gauge.t_hi);

    NResult r = detail::rk45(sys, t0, {u0, y0}, t_end, cfg);
    return pack_trajectory(ode, r, ode.form == ReducedForm::explicit_rhs ? "abel" : "generic",
                           t_end >= t0, grid);
}

Trajectory reconstruct_aux(const ReducedODE& ode, double t0, double v0, double y0, double t_end,
                           const SolverConfig& cfg, int grid) {
    if (ode.kind == VariableKind::u)
        fail(errc::bad_input, "reconstruct_aux needs an auxiliary-variable reduced equation");
    if (!(y0 > 0.0)) fail(errc::bad_input, "y0 must be positive");
    ode.gauge.require_inside(t0);

    std::function<double(double)> to_v =
        ode.to_v ? ode.to_v : std::function<double(double)>([](double w) { return w; });
    const double c = ode.c;
    const GaugeFunction& g = ode.gauge;
    {
        const double cvz = c * to_v(v0) * g.z(t0);
        if (std::abs(1.0 - cvz) <= cfg.eps_sing * std::max(1.0, std::abs(cvz)))
            fail(errc::singular_denominator, "1 - c v z vanishes at the initial point");
    }

    auto warm = std::make_shared<double>(0.0);
    auto wdot = reduced_rhs(ode, warm, cfg);

    System sys;
    sys.dim = 2;
    sys.f = [&wdot, &to_v, c, &g](double t, const double* w, double* out) {
        out[0] = wdot(t, w[0]);
        const double v = to_v(w[0]);
        const double den = 1.0 - c * v * g.z(t);
        out[1] = w[1] * v * g.zdot(t) / den; // dy/dt = y v zdot / (1 - c v z)
    };
    if (ode.denom) sys.denom = [&ode](double t, const double* w) { return ode.denom(t, w[0]); };
    const double eps = cfg.eps_sing;
    sys.singular = [&ode, &to_v, c, &g, eps](double t, const double* w) {
        if (w[1] <= 0.0) return true;
        if (ode.singular && ode.singular(t, w[0])) return true;
        const double cvz = c * to_v(w[0]) * g.z(t);
        return std::abs(1.0 - cvz) <= eps * std::max(1.0, std::abs(cvz));
    };
    sys.t_lo = std::max(ode.t_lo, ode.gauge.t_lo);
    sys.t_hi = std::min(ode.t_hi, ode.gauge.t_hi);

    NResult r = detail::rk45(sys, t0, {v0, y0}, t_end, cfg);
    return pack_trajectory(ode, r, "aux", t_end >= t0, grid);
}

} // namespace majorana
