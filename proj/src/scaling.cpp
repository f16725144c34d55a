#include "majorana/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "majorana/error.hpp"
#include "majorana/parallel.hpp"

namespace majorana {

namespace {

constexpr double kVanishFloor = 1e-280; // below this the ratio is indeterminate

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

struct PairStatus {
    double deviation_input = 0.0; // log|ratio| when usable
    int sign = 0;                 // sign of the ratio; 0 marks a skipped pair
    bool violated = false;        // scaled point left the domain
};

// Shared element kernel: everything that is evaluated per (point, alpha)
// pair. Writes only to its own slot so the parallel and serial drivers can
// share it verbatim.
struct FitWorkspace {
    const ResidualODE2* f;
    double c;
    std::span<const ProbePoint> points;
    std::span<const double> alphas;
    std::vector<double> f0;      // residual at each unscaled point
    std::vector<PairStatus> st;  // one per (point, alpha) pair

    void eval_pair(std::ptrdiff_t idx) {
        const std::size_t na = alphas.size();
        const ProbePoint& p = points[idx / na];
        const double alpha = alphas[idx % na];
        PairStatus& out = st[idx];
        const double base = f0[idx / na];
        if (!std::isfinite(base) || std::abs(base) < kVanishFloor) return; // point skipped
        const double sx = std::pow(alpha, c) * p.x;
        const double sy = alpha * p.y;
        const double syp = std::pow(alpha, 1.0 - c) * p.yp;
        const double sypp = std::pow(alpha, 1.0 - 2.0 * c) * p.ypp;
        if (!f->in_domain(sx, sy)) {
            out.violated = true;
            return;
        }
        const double val = f->evaluate(sx, sy, syp, sypp);
        if (!std::isfinite(val)) {
            out.violated = true;
            return;
        }
        const double ratio = val / base;
        if (ratio == 0.0) {
            // scaled point landed on the zero set while the original is off
            // it; maximal evidence against invariance, excluded from the fit
            out.sign = -1;
            out.deviation_input = -std::numeric_limits<double>::infinity();
            return;
        }
        out.sign = ratio > 0.0 ? 1 : -1;
        out.deviation_input = std::log(std::abs(ratio));
    }
};

DefectFit fit_impl(const ResidualODE2& f, double c, std::span<const ProbePoint> points,
                   std::span<const double> alphas, bool parallel) {
    if (points.empty() || alphas.empty()) fail(errc::bad_input, "empty probe set");
    for (double a : alphas)
        if (!(a > 0.0)) fail(errc::non_positive_scale, "probe scale alpha must be positive");

    FitWorkspace ws{&f, c, points, alphas, {}, {}};
    ws.f0.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const ProbePoint& p = points[i];
        if (!f.in_domain(p.x, p.y))
            fail(errc::domain_violation, "probe point outside the residual domain");
        ws.f0[i] = f.evaluate(p.x, p.y, p.yp, p.ypp);
        if (!std::isfinite(ws.f0[i]))
            fail(errc::domain_violation, "residual not finite at a probe point");
    }

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points.size() * alphas.size());
    ws.st.resize(n);
    auto kernel = [&ws](std::ptrdiff_t i) { ws.eval_pair(i); };
    if (parallel)
        parallel_for(n, kernel);
    else
        serial_for(n, kernel);

    bool any_point_usable = false;
    for (double v : ws.f0)
        if (std::isfinite(v) && std::abs(v) >= kVanishFloor) any_point_usable = true;
    if (!any_point_usable)
        fail(errc::indeterminate_ratio, "residual vanishes at every probe point");

    // least-squares degree over log alpha; pairs with a negative ratio are
    // excluded from the fit but still count in the deviation below
    double num = 0.0, den = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const PairStatus& s = ws.st[i];
        if (s.violated) fail(errc::domain_violation, "scaled probe point left the residual domain");
        if (s.sign <= 0) continue;
        const double la = std::log(alphas[i % alphas.size()]);
        num += s.deviation_input * la;
        den += la * la;
    }
    const double k = den > 0.0 ? num / den : 0.0;

    double defect = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const PairStatus& s = ws.st[i];
        if (s.sign == 0) continue;
        const double la = std::log(alphas[i % alphas.size()]);
        // ratio * alpha^{-k} in log space to dodge overflow at large |k|
        const double scaled = s.sign * std::exp(s.deviation_input - k * la);
        defect = std::max(defect, std::abs(scaled - 1.0));
    }
    return {defect, k};
}

ScalingLaw estimate_impl(const ResidualODE2& f, double c_lo, double c_hi,
                         std::span<const ProbePoint> points, std::span<const double> alphas,
                         double threshold, bool parallel) {
    if (!(c_lo < c_hi)) fail(errc::bad_input, "exponent interval must be non-degenerate");
    for (double a : alphas)
        if (!(a > 0.0)) fail(errc::non_positive_scale, "probe scale alpha must be positive");

    constexpr int kGrid = 65;
    constexpr int kRounds = 8;
    double lo = c_lo, hi = c_hi;
    double best_c = 0.5 * (lo + hi);

    for (int round = 0; round < kRounds; ++round) {
        std::vector<double> defects(kGrid, std::numeric_limits<double>::infinity());
        const double step = (hi - lo) / (kGrid - 1);
        auto kernel = [&](std::ptrdiff_t i) {
            const double c = lo + step * static_cast<double>(i);
            try {
                defects[i] = fit_impl(f, c, points, alphas, false).defect;
            } catch (const Error&) {
                // candidate exponents that push probes out of the domain
                // simply lose the scan
            }
        };
        if (parallel)
            parallel_for(kGrid, kernel);
        else
            serial_for(kGrid, kernel);

        int best = 0;
        for (int i = 1; i < kGrid; ++i)
            if (defects[i] < defects[best]) best = i;
        best_c = lo + step * best;
        const double nlo = lo + step * std::max(0, best - 1);
        const double nhi = lo + step * std::min(kGrid - 1, best + 1);
        lo = nlo;
        hi = nhi;
    }

    const DefectFit fit = fit_impl(f, best_c, points, alphas, false);
    if (!(fit.defect <= threshold)) {
        std::ostringstream os;
        os << "minimal defect " << fit.defect << " at c = " << best_c << " exceeds threshold "
           << threshold;
        fail(errc::no_invariant_exponent, os.str());
    }
    return {best_c, fit.k};
}

} // namespace

ScalingLaw emden_fowler_exponent(EmdenFowlerParams params) {
    if (params.a == -2.0)
        fail(errc::degenerate_exponent, "no scaling exponent exists for a = -2");
    const double c = (1.0 - params.b) / (params.a + 2.0);
    if (!std::isfinite(c)) fail(errc::degenerate_exponent, "scaling exponent not finite");
    return {c, 1.0 - 2.0 * c};
}

ResidualODE2 emden_fowler_residual(EmdenFowlerParams params) {
    std::ostringstream os;
    os << "y'' - x^" << params.a << " y^" << params.b;
    ResidualODE2 f;
    const double a = params.a, b = params.b;
    f.evaluate = [a, b](double x, double y, double, double ypp) {
        return ypp - std::pow(x, a) * std::pow(y, b);
    };
    f.in_domain = [](double x, double y) { return x > 0.0 && y > 0.0; };
    f.description = os.str();
    return f;
}

ResidualODE2 thomas_fermi_residual() {
    ResidualODE2 f = emden_fowler_residual({-0.5, 1.5});
    f.description = "y'' - y^(3/2)/sqrt(x)";
    return f;
}

std::vector<ProbePoint> default_probe_points(const ResidualODE2& f, int n) {
    // Halton points in a box away from the coordinate axes, rejected
    // against the residual domain.
    std::vector<ProbePoint> pts;
    int idx = 1;
    while (static_cast<int>(pts.size()) < n && idx < 10000 * n) {
        ProbePoint p;
        p.x = 0.5 + 1.5 * halton(idx, 2);
        p.y = 0.5 + 1.5 * halton(idx, 3);
        p.yp = -2.0 + 4.0 * halton(idx, 5);
        p.ypp = -2.0 + 4.0 * halton(idx, 7);
        ++idx;
        if (f.in_domain(p.x, p.y)) pts.push_back(p);
    }
    if (static_cast<int>(pts.size()) < n)
        fail(errc::bad_input, "could not place probe points inside the residual domain");
    return pts;
}

std::vector<double> default_alphas() { return {0.5, 2.0, 3.0}; }

DefectFit invariance_fit(const ResidualODE2& f, double c, std::span<const ProbePoint> points,
                         std::span<const double> alphas) {
    return fit_impl(f, c, points, alphas, true);
}

double invariance_defect(const ResidualODE2& f, double c, std::span<const ProbePoint> points,
                         std::span<const double> alphas) {
    return fit_impl(f, c, points, alphas, true).defect;
}

ScalingLaw estimate_exponent(const ResidualODE2& f, double c_lo, double c_hi,
                             std::span<const ProbePoint> points, std::span<const double> alphas,
                             double threshold) {
    return estimate_impl(f, c_lo, c_hi, points, alphas, threshold, true);
}

namespace serial {

DefectFit invariance_fit(const ResidualODE2& f, double c, std::span<const ProbePoint> points,
                         std::span<const double> alphas) {
    return fit_impl(f, c, points, alphas, false);
}

double invariance_defect(const ResidualODE2& f, double c, std::span<const ProbePoint> points,
                         std::span<const double> alphas) {
    return fit_impl(f, c, points, alphas, false).defect;
}

ScalingLaw estimate_exponent(const ResidualODE2& f, double c_lo, double c_hi,
                             std::span<const ProbePoint> points, std::span<const double> alphas,
                             double threshold) {
    return estimate_impl(f, c_lo, c_hi, points, alphas, threshold, false);
}

} // namespace serial

} // namespace majorana
