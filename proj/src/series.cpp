#include "implode/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace implode {

namespace {

double tail_ratio(const std::vector<double>& a) {
    // Empirical limsup of the coefficient growth rate over the trailing half.
    // Consecutive ratios alone spike when |a_i| dips, so cap them by the
    // |a_n|^(1/n) envelope.
    double ratio = 0.0, envelope = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = std::max<std::size_t>(1, n / 2); i + 1 < n; ++i) {
        if (a[i] != 0.0) ratio = std::max(ratio, std::abs(a[i + 1] / a[i]));
        if (a[i] != 0.0) envelope = std::max(envelope, std::pow(std::abs(a[i]), 1.0 / double(i)));
    }
    if (envelope == 0.0) return ratio;
    return std::min(ratio, envelope);
}

}  // namespace

double radius_estimate(const TaylorSeries& s) {
    const auto& a = s.coeffs;
    const std::size_t n = a.size();
    double sup = 0.0;
    for (std::size_t i = n / 2; i < n; ++i) {
        if (a[i] == 0.0 || i == 0) continue;
        sup = std::max(sup, std::pow(std::abs(a[i]), 1.0 / double(i)));
    }
    if (sup == 0.0) return 1e6;  // polynomial-like tail
    return 0.5 / sup;
}

TaylorSeries p0_series(const ParamSet& ps, int N) {
    if (N < 1) throw domain_error("p0_series: N must be >= 1");
    const double k = ps.k, m = ps.m, ell = ps.ell;

    std::vector<double> phi(N + 1, 0.0);
    // Running convolutions: c2 = phi*phi, c3 = phi*phi*phi, c4 = phi^4,
    // d1 = phi * (n phi_n), d2 = c2 * (n phi_n). Entry j is final once
    // phi_0..phi_j are known.
    std::vector<double> c2(N + 1, 0.0), c3(N + 1, 0.0), c4(N + 1, 0.0);
    std::vector<double> d1(N + 1, 0.0), d2(N + 1, 0.0);

    phi[0] = m / (k + 1.0);
    auto extend = [&](int j) {
        // fill convolution entries at index j from phi_0..phi_j; each array
        // must be complete up to j before the next one reads it
        double s2 = 0;
        for (int i = 0; i <= j; ++i) s2 += phi[i] * phi[j - i];
        c2[j] = s2;
        double s3 = 0;
        for (int i = 0; i <= j; ++i) s3 += phi[i] * c2[j - i];
        c3[j] = s3;
        double s4 = 0;
        for (int i = 0; i <= j; ++i) s4 += phi[i] * c3[j - i];
        c4[j] = s4;
        double t1 = 0, t2 = 0;
        for (int i = 0; i <= j; ++i) {
            t1 += phi[i] * (double(j - i) * phi[j - i]);
            t2 += c2[i] * (double(j - i) * phi[j - i]);
        }
        d1[j] = t1;
        d2[j] = t2;
    };
    extend(0);

    for (int n = 1; n <= N; ++n) {
        const double cm2 = (n >= 2) ? c3[n - 2] : 0.0;
        const double cm4 = (n >= 2) ? c4[n - 2] : 0.0;
        const double dm2 = (n >= 2) ? d2[n - 2] : 0.0;
        double rhs = ell * phi[n - 1] + (k - 2.0 * m - 2.0 * ell + 2.0) * c2[n - 1] +
                     (k + ell) * c3[n - 1] - cm2 + (m - k) * cm4 +
                     2.0 * ell * double(n - 1) * phi[n - 1] - 4.0 * (ell - 1.0) * d1[n - 1] +
                     2.0 * ell * d2[n - 1] - 2.0 * dm2;
        phi[n] = rhs / (k + 1.0 + 2.0 * n);
        extend(n);
    }

    TaylorSeries s;
    s.center = 0.0;
    s.coeffs = std::move(phi);
    s.kind = SeriesKind::P0_phi;
    s.radius_estimate = radius_estimate(s);
    return s;
}

TaylorSeries q1_series(const ParamSet& ps, const SonicData& sd, int N) {
    if (N < 1) throw domain_error("q1_series: N must be >= 1");
    const double R = sd.R, delta = sd.delta;
    for (int n = 2; n <= N; ++n)
        if (std::abs(R - n) < 1e-8)
            throw pole_error("q1_series: R within 1e-8 of integer " + std::to_string(n));

    const double k = ps.k, A = ps.A, B = ps.B;
    std::vector<double> a(N + 1, 0.0);
    a[0] = ps.eps;
    if (N >= 1) a[1] = sd.a1;

    for (int n = 2; n <= N; ++n) {
        double s_high = 0.0;  // sum_{j=2}^{n-1} a_j a_{n+1-j}
        for (int j = 2; j <= n - 1; ++j) s_high += a[j] * a[n + 1 - j];
        double s_low = 0.0;  // sum_{j=1}^{n-1} a_j a_{n-j}
        for (int j = 1; j <= n - 1; ++j) s_low += a[j] * a[n - j];
        const double En = -0.5 * (n + 1.0) * s_high - (2.0 - 0.5 * (k + 1.0) * n) * s_low -
                          ((n - 3.0) * A + (n - 1.0) * B + 2.0 * k) * a[n - 1] +
                          ((n - 4.0) * B + 2.0 * k) * a[n - 2];
        a[n] = En / ((R - n) * delta);
    }

    TaylorSeries s;
    s.center = 0.0;
    s.coeffs = std::move(a);
    s.kind = SeriesKind::Q1_a;
    s.radius_estimate = radius_estimate(s);

    // The first few coefficients must agree with the closed forms.
    if (N >= 4) {
        const auto c = b_constants(ps, sd);
        const double want[] = {c.a2, c.a3, c.a4};
        for (int i = 0; i < 3; ++i) {
            const double got = s.coeffs[i + 2];
            if (std::abs(got - want[i]) > 1e-9 * std::max(1.0, std::abs(want[i])))
                throw numerical_error("q1_series: recurrence disagrees with closed forms");
        }
    }
    return s;
}

SeriesEval eval_series(const TaylorSeries& s, double x, double tol) {
    const double dx = x - s.center;
    if (std::abs(dx) > s.radius_estimate * (1.0 + 1e-12))
        throw radius_error("eval_series: point outside estimated radius");
    SeriesEval out;
    double acc = 0.0;
    for (std::size_t i = s.coeffs.size(); i-- > 0;) acc = acc * dx + s.coeffs[i];
    out.value = acc;

    // size of the last kept terms (max of the final three, robust to dips)
    double last_term = 0.0;
    for (std::size_t j = s.coeffs.size() >= 3 ? s.coeffs.size() - 3 : 0; j < s.coeffs.size();
         ++j)
        last_term = std::max(last_term,
                             std::abs(s.coeffs[j]) * std::pow(std::abs(dx), double(j)));
    const double r = std::abs(dx) * tail_ratio(s.coeffs);
    if (last_term == 0.0) {
        out.tail_bound = 0.0;
    } else if (r < 1.0) {
        out.tail_bound = last_term * r / (1.0 - r);
        if (r == 0.0) out.tail_bound = 0.0;
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
    }
    out.tail_ok = out.tail_bound < tol * std::max(1.0, std::abs(out.value));
    return out;
}

double eval_series_deriv(const TaylorSeries& s, double x) {
    const double dx = x - s.center;
    double acc = 0.0;
    for (std::size_t i = s.coeffs.size(); i-- > 1;) acc = acc * dx + s.coeffs[i] * double(i);
    return acc;
}

double p0_v(const TaylorSeries& s, double Z) {
    if (s.kind != SeriesKind::P0_phi) throw domain_error("p0_v: not a P0 series");
    const double kap = Z * Z;
    double acc = 0.0;
    for (std::size_t i = s.coeffs.size(); i-- > 0;) acc = acc * kap + s.coeffs[i];
    return Z * acc;
}

double p0_dv(const TaylorSeries& s, double Z) {
    if (s.kind != SeriesKind::P0_phi) throw domain_error("p0_dv: not a P0 series");
    const double kap = Z * Z;
    double phi = 0.0;
    for (std::size_t i = s.coeffs.size(); i-- > 0;) phi = phi * kap + s.coeffs[i];
    double dphi = 0.0;
    for (std::size_t i = s.coeffs.size(); i-- > 1;) dphi = dphi * kap + s.coeffs[i] * double(i);
    return phi + 2.0 * kap * dphi;
}

}  // namespace implode
