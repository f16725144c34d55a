#include "majorana/series.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "majorana/error.hpp"

namespace majorana {

namespace {

using Trunc = std::vector<double>; // series coefficients, fixed truncation length

Trunc mul(const Trunc& a, const Trunc& b, std::size_t len) {
    Trunc out(len, 0.0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// Series of P(t0 + s, w(s)) truncated to len coefficients.
Trunc compose(const BivariatePoly& poly, double t0, const Trunc& w, std::size_t len) {
    const std::size_t nt = poly.coeff.size();
    std::size_t nw = 0;
    for (const auto& row : poly.coeff) nw = std::max(nw, row.size());

    // powers of (t0 + s) and of the w-series
    std::vector<Trunc> tp(nt), wp(nw);
    if (nt > 0) tp[0] = Trunc(1, 1.0);
    Trunc t_lin = {t0, 1.0};
    for (std::size_t i = 1; i < nt; ++i) tp[i] = mul(tp[i - 1], t_lin, len);
    if (nw > 0) wp[0] = Trunc(1, 1.0);
    for (std::size_t j = 1; j < nw; ++j) wp[j] = mul(wp[j - 1], w, len);

    Trunc out(len, 0.0);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < poly.coeff[i].size(); ++j) {
            const double cij = poly.coeff[i][j];
            if (cij == 0.0) continue;
            Trunc term = mul(tp[i], wp[j], len);
            for (std::size_t m = 0; m < len; ++m) out[m] += cij * term[m];
        }
    return out;
}

double max_abs_coeff(const BivariatePoly& p) {
    double m = 0.0;
    for (const auto& row : p.coeff)
        for (double c : row) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

double BivariatePoly::eval(double t, double w) const {
    double sum = 0.0;
    double tp = 1.0;
    for (const auto& row : coeff) {
        double inner = 0.0;
        for (std::size_t j = row.size(); j-- > 0;) inner = inner * w + row[j];
        sum += tp * inner;
        tp *= t;
    }
    return sum;
}

int BivariatePoly::deg_w() const {
    std::size_t nw = 0;
    for (const auto& row : coeff) nw = std::max(nw, row.size());
    return static_cast<int>(nw) - 1;
}

PowerSeries series_solve_rational(const BivariatePoly& P, const BivariatePoly& Q, double t0,
                                  double w0, int N) {
    if (N < 1) fail(errc::bad_input, "series order must be >= 1");
    const double p00 = P.eval(t0, w0);
    if (std::abs(p00) < 1e-12 * std::max(1.0, max_abs_coeff(P)))
        fail(errc::singular_expansion_point, "P(t0, w0) vanishes; no regular series exists here");

    std::vector<double> a(static_cast<std::size_t>(N) + 1, 0.0);
    a[0] = w0;

    // a_k is fixed by the s^(k-1) coefficient of P w' - Q, linear in a_k with
    // factor k P(t0, w0); lower coefficients involve only a_0 .. a_{k-1}
    for (int k = 1; k <= N; ++k) {
        const std::size_t len = static_cast<std::size_t>(k);
        Trunc w(a.begin(), a.begin() + k);
        Trunc ps = compose(P, t0, w, len);
        Trunc qs = compose(Q, t0, w, len);
        Trunc wd(len, 0.0);
        for (int j = 0; j + 1 < k; ++j) wd[j] = (j + 1) * a[j + 1];
        Trunc pw = mul(ps, wd, len);
        const double resid = pw[len - 1] - qs[len - 1];
        a[k] = -resid / (k * p00);
        if (std::abs(a[k]) > 1e300)
            fail(errc::overflow_detected, "series coefficient exceeded the overflow guard");
    }

    PowerSeries out;
    out.center = t0;
    out.coeffs = std::move(a);
    return out;
}

double series_eval(const PowerSeries& ps, double t) {
    const double s = t - ps.center;
    double sum = 0.0;
    for (std::size_t i = ps.coeffs.size(); i-- > 0;) sum = sum * s + ps.coeffs[i];
    return sum;
}

PowerSeries series_ode_residual(const BivariatePoly& P, const BivariatePoly& Q,
                                const PowerSeries& ps) {
    const int N = ps.order();
    if (N < 1) fail(errc::bad_input, "series order must be >= 1");
    const std::size_t len = static_cast<std::size_t>(N); // orders 0 .. N-1
    Trunc w(ps.coeffs.begin(), ps.coeffs.end());
    Trunc pr = compose(P, ps.center, w, len);
    Trunc qr = compose(Q, ps.center, w, len);
    Trunc wd(len, 0.0);
    for (int j = 0; j < N; ++j) wd[j] = (j + 1) * ps.coeffs[j + 1];
    Trunc pw = mul(pr, wd, len);
    PowerSeries out;
    out.center = ps.center;
    out.coeffs.resize(len);
    for (std::size_t i = 0; i < len; ++i) out.coeffs[i] = pw[i] - qr[i];
    return out;
}

BivariatePoly tf_aux_poly_P() {
    BivariatePoly p;
    p.coeff = {{1.0}, {}, {0.0, -1.0}}; // 1 - t^2 w
    return p;
}

BivariatePoly tf_aux_poly_Q() {
    BivariatePoly q;
    q.coeff = {{-8.0}, {0.0, 0.0, 8.0}}; // 8 t w^2 - 8
    return q;
}

PowerSeries tf_boundary_series_at_one(int N) {
    // In s = 1 - t the equation reads (1 - (1-s)^2 w) dw/ds = 8 (1 - (1-s) w^2);
    // (t, vt) = (1, 0) maps to a regular point (s, w) = (0, 0) with P = 1.
    BivariatePoly P;
    P.coeff = {{1.0, -1.0}, {0.0, 2.0}, {0.0, -1.0}};
    BivariatePoly Q;
    Q.coeff = {{8.0, 0.0, -8.0}, {0.0, 0.0, 8.0}};
    return series_solve_rational(P, Q, 0.0, 0.0, N);
}

double series_radius_estimate(const PowerSeries& ps) {
    std::vector<double> ratios;
    const auto& a = ps.coeffs;
    for (std::size_t k = a.size() >= 6 ? a.size() - 6 : 0; k + 1 < a.size(); ++k)
        if (a[k] != 0.0 && a[k + 1] != 0.0) ratios.push_back(std::abs(a[k] / a[k + 1]));
    if (ratios.empty()) return std::numeric_limits<double>::infinity();
    std::sort(ratios.begin(), ratios.end());
    return ratios[ratios.size() / 2];
}

} // namespace majorana
