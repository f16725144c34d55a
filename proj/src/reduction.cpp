#include "majorana/reduction.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "majorana/error.hpp"

namespace majorana {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool near_zero(double value, double scale, double eps) {
    return std::abs(value) < eps * std::max(1.0, std::abs(scale));
}

void require_power_domain(double z, double a) {
    if (a != std::floor(a) && !(z > 0.0))
        fail(errc::out_of_gauge_domain, "z must be positive for a fractional exponent a");
}

void require_zdot(double zd) {
    if (zd == 0.0 || !std::isfinite(zd))
        fail(errc::degenerate_gauge, "reduction needs zdot != 0");
}

} // namespace

AbelCoefficients abel_coefficients(EmdenFowlerParams params, const GaugeFunction& gauge, double t) {
    const ScalingLaw law = emden_fowler_exponent(params); // throws for a = -2
    gauge.require_inside(t);
    const double z = gauge.z(t);
    const double zd = gauge.zdot(t);
    const double zdd = gauge.zddot(t);
    require_zdot(zd);
    require_power_domain(z, params.a);

    const double c = law.c;
    const double za = std::pow(z, params.a);
    AbelCoefficients k;
    k.alpha = za * zd * zd;
    k.beta = 3.0 * c * za * z * zd + zdd / zd;
    k.gamma = 3.0 * c * c * za * z * z + 2.0 * c - 1.0;
    k.delta = c * c * c * za * z * z * z / zd + c * (c - 1.0) * z / zd;
    return k;
}

double abel_rhs(double t, double u, EmdenFowlerParams params, const GaugeFunction& gauge) {
    const AbelCoefficients k = abel_coefficients(params, gauge, t);
    return k.alpha + u * (k.beta + u * (k.gamma + u * k.delta));
}

double aux_rhs(double t, double v, EmdenFowlerParams params, const GaugeFunction& gauge,
               double eps_sing) {
    const ScalingLaw law = emden_fowler_exponent(params);
    gauge.require_inside(t);
    const double z = gauge.z(t);
    const double zd = gauge.zdot(t);
    require_zdot(zd);
    require_power_domain(z, params.a);

    const double c = law.c;
    const double cvz = c * v * z;
    const double den = 1.0 - cvz;
    if (near_zero(den, cvz, eps_sing))
        fail(errc::singular_denominator, "1 - c v z vanishes");
    return zd * (std::pow(z, params.a) - (1.0 - c) * v * v) / den;
}

ReducedODE abel_reduced(EmdenFowlerParams params, GaugeFunction gauge) {
    const ScalingLaw law = emden_fowler_exponent(params);
    ReducedODE ode;
    ode.form = ReducedForm::explicit_rhs;
    ode.c = law.c;
    ode.gauge = gauge;
    ode.kind = VariableKind::u;
    ode.t_lo = gauge.t_lo;
    ode.t_hi = gauge.t_hi;
    ode.rhs = [params, gauge](double t, double u) { return abel_rhs(t, u, params, gauge); };
    return ode;
}

ReducedODE aux_reduced(EmdenFowlerParams params, GaugeFunction gauge, double eps_sing) {
    const ScalingLaw law = emden_fowler_exponent(params);
    const double c = law.c;
    ReducedODE ode;
    ode.form = ReducedForm::explicit_rhs;
    ode.c = c;
    ode.gauge = gauge;
    ode.kind = VariableKind::v;
    ode.t_lo = gauge.t_lo;
    ode.t_hi = gauge.t_hi;
    ode.rhs = [params, gauge, eps_sing](double t, double v) {
        return aux_rhs(t, v, params, gauge, eps_sing);
    };
    ode.denom = [c, gauge](double t, double v) { return 1.0 - c * v * gauge.z(t); };
    ode.singular = [c, gauge, eps_sing](double t, double v) {
        const double cvz = c * v * gauge.z(t);
        return near_zero(1.0 - cvz, cvz, eps_sing);
    };
    ode.to_v = [](double w) { return w; };
    return ode;
}

ReducedODE tf_abel_reduced() {
    ReducedODE ode;
    ode.form = ReducedForm::explicit_rhs;
    ode.c = -1.0 / 3.0;
    ode.gauge = gauge_tf_abel();
    ode.kind = VariableKind::u;
    ode.t_lo = -inf;
    ode.t_hi = 1.0;
    ode.rhs = [](double t, double u) {
        if (t >= 1.0) fail(errc::out_of_gauge_domain, "reduced Thomas-Fermi form needs t < 1");
        const double omt = 1.0 - t;
        return 16.0 / (3.0 * omt) + (8.0 + 1.0 / (3.0 * omt)) * u + (7.0 / 3.0 - 4.0 * t) * u * u -
               (2.0 / 3.0) * t * omt * u * u * u;
    };
    return ode;
}

double tf_v_from_vtilde(double vtilde) { return -std::cbrt(12.0) * vtilde / 4.0; }

ReducedODE tf_aux_reduced(double eps_sing) {
    ReducedODE ode;
    ode.form = ReducedForm::explicit_rhs;
    ode.c = -1.0 / 3.0;
    ode.gauge = gauge_tf_aux();
    ode.kind = VariableKind::v_tilde;
    // the rescaled form is regular wherever 1 - t^2 vt != 0, including t <= 0
    ode.t_lo = -inf;
    ode.t_hi = inf;
    ode.rhs = [eps_sing](double t, double vt) {
        const double t2v = t * t * vt;
        const double den = 1.0 - t2v;
        if (near_zero(den, t2v, eps_sing))
            fail(errc::singular_denominator, "1 - t^2 vt vanishes");
        return 8.0 * (t * vt * vt - 1.0) / den;
    };
    ode.denom = [](double t, double vt) { return 1.0 - t * t * vt; };
    ode.singular = [eps_sing](double t, double vt) {
        const double t2v = t * t * vt;
        return near_zero(1.0 - t2v, t2v, eps_sing);
    };
    ode.to_v = [](double vt) { return tf_v_from_vtilde(vt); };
    return ode;
}

double generic_reduced_residual(const ResidualODE2& f, ScalingLaw law, const GaugeFunction& gauge,
                                double t, double u, double udot, double eps_sing) {
    gauge.require_inside(t);
    const double z = gauge.z(t);
    const double zd = gauge.zdot(t);
    const double zdd = gauge.zddot(t);
    require_zdot(zd);
    const double c = law.c;

    const double den = zd + c * u * z;
    if (near_zero(den, std::max(std::abs(zd), std::abs(c * u * z)), eps_sing))
        fail(errc::singular_denominator, "zdot + c u z vanishes");

    const double v1 = u / den;
    const double v2 =
        (zd * udot - zdd * u + (1.0 - 2.0 * c) * zd * u * u + c * (1.0 - c) * z * u * u * u) /
        (den * den * den);
    if (!f.in_domain(z, 1.0))
        fail(errc::out_of_gauge_domain, "(z, 1) outside the residual domain");
    return f.evaluate(z, 1.0, v1, v2);
}

double aux_reduced_residual(const ResidualODE2& f, ScalingLaw law, const GaugeFunction& gauge,
                            double t, double v, double vdot) {
    gauge.require_inside(t);
    const double z = gauge.z(t);
    const double zd = gauge.zdot(t);
    require_zdot(zd);
    const double c = law.c;
    const double v2 = (1.0 - c * v * z) * (vdot / zd) + (1.0 - c) * v * v;
    if (!f.in_domain(z, 1.0))
        fail(errc::out_of_gauge_domain, "(z, 1) outside the residual domain");
    return f.evaluate(z, 1.0, v, v2);
}

ReducedODE generic_reduced(ResidualODE2 f, ScalingLaw law, GaugeFunction gauge, double eps_sing) {
    ReducedODE ode;
    ode.form = ReducedForm::implicit_residual;
    ode.c = law.c;
    ode.gauge = gauge;
    ode.kind = VariableKind::u;
    ode.t_lo = gauge.t_lo;
    ode.t_hi = gauge.t_hi;
    const double c = law.c;
    ode.residual = [f, law, gauge, eps_sing](double t, double u, double udot) {
        return generic_reduced_residual(f, law, gauge, t, u, udot, eps_sing);
    };
    ode.denom = [c, gauge](double t, double u) { return gauge.zdot(t) + c * u * gauge.z(t); };
    ode.singular = [c, gauge, eps_sing](double t, double u) {
        const double zd = gauge.zdot(t);
        const double cuz = c * u * gauge.z(t);
        return near_zero(zd + cuz, std::max(std::abs(zd), std::abs(cuz)), eps_sing);
    };
    return ode;
}

ReducedODE aux_generic_reduced(ResidualODE2 f, ScalingLaw law, GaugeFunction gauge,
                               double eps_sing) {
    ReducedODE ode;
    ode.form = ReducedForm::implicit_residual;
    ode.c = law.c;
    ode.gauge = gauge;
    ode.kind = VariableKind::v;
    ode.t_lo = gauge.t_lo;
    ode.t_hi = gauge.t_hi;
    const double c = law.c;
    ode.residual = [f, law, gauge](double t, double v, double vdot) {
        return aux_reduced_residual(f, law, gauge, t, v, vdot);
    };
    ode.denom = [c, gauge](double t, double v) { return 1.0 - c * v * gauge.z(t); };
    ode.singular = [c, gauge, eps_sing](double t, double v) {
        const double cvz = c * v * gauge.z(t);
        return near_zero(1.0 - cvz, cvz, eps_sing);
    };
    ode.to_v = [](double w) { return w; };
    return ode;
}

double slope_variable(const ReducedODE& ode, double t, double w) {
    if (ode.kind == VariableKind::u) {
        const double z = ode.gauge.z(t);
        const double zd = ode.gauge.zdot(t);
        const double den = zd + ode.c * w * z;
        if (den == 0.0) fail(errc::singular_denominator, "zdot + c u z vanishes");
        return w / den;
    }
    return ode.to_v ? ode.to_v(w) : w;
}

} // namespace majorana
