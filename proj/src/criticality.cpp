#include "implode/criticality.hpp"

#include <cmath>
#include <string>

namespace implode {

double f1(int k, double eps) {
    if (eps < 0) throw domain_error("f1: eps must be >= 0");
    return (k + 2.0) * std::sqrt(1.0 + eps) - 4.0 * std::sqrt(2.0 * k * eps / 3.0);
}

double f2(int k, double ell) {
    if (!(ell > 0)) throw domain_error("f2: ell must be > 0");
    return k / std::sqrt(ell) - 2.0 * std::sqrt(ell);
}

double f3(int k, double eps) {
    if (eps < 0) throw domain_error("f3: eps must be >= 0");
    return (68.0 * k + 12.0) * eps -
           (33.0 * k + 64.0) * std::sqrt(2.0 * k / 3.0) * std::sqrt(eps * (1.0 + eps));
}

double Ek_upper(int k) {
    if (k <= 6) return kInfMarker;
    return 32.0 * k / ((3.0 * k - 2.0) * (k - 6.0));
}

namespace {

// Solve f2(k, ell) = c for ell > 0: 2 ell + c sqrt(ell) - k = 0.
double ell_from_f2(int k, double c) {
    const double s = (-c + std::sqrt(c * c + 8.0 * k)) / 4.0;
    return s * s;
}

}  // namespace

std::pair<double, double> ell_range(int k) {
    // f2(k, ell_minus) = f1(k, 0) = k+2.
    const double lo = ell_from_f2(k, k + 2.0);
    double hi;
    if (k <= 5) {
        hi = kInfMarker;
    } else if (k == 6) {
        hi = 3.0;
    } else {
        hi = ell_from_f2(k, std::sqrt((3.0 * k - 2.0) * (k - 6.0) / 3.0));
    }
    return {lo, hi};
}

double epsilon_star(int k, double ell) {
    if (k < 2) throw domain_error("epsilon_star: defined for k >= 2");
    const auto [lo, hi] = ell_range(k);
    if (!(ell > lo) || !(ell < hi))
        throw range_error("epsilon_star: ell outside (ell_minus, ell_plus) for k=" +
                          std::to_string(k));
    const double target = f2(k, ell);
    double a = 1e-12;
    double b = std::min(Ek_upper(k), 1e6);
    // f1 - target is strictly decreasing on E_k; expand the cap if needed.
    while (f1(k, b) - target > 0.0) {
        b *= 100.0;
        if (b > 1e14) throw numerical_error("epsilon_star: failed to bracket");
    }
    if (f1(k, a) - target < 0.0) throw numerical_error("epsilon_star: bad lower bracket");
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        if (f1(k, mid) - target > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double F_value(int k, double ell) {
    return f3(k, epsilon_star(k, ell)) + 52.0 * k - 12.0 * ell + 12.0;
}

double ell1(int k) {
    if (k < 1) throw domain_error("ell1: k must be a positive integer");
    if (k == 1) return kInfMarker;  // B2 > 0 unconditionally
    const auto [lo_range, hi_range] = ell_range(k);
    (void)lo_range;
    double a = 1.0 + 1e-9;
    double b = std::isinf(hi_range) ? 2.0 : std::min(2.0, hi_range - 1e-6);
    if (!(F_value(k, a) > 0.0) || !(F_value(k, b) < 0.0))
        throw numerical_error("ell1: root not bracketed in (1, 2)");
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        if (F_value(k, mid) > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double ell0(int k) {
    if (k <= 5) return kInfMarker;
    const double disc = (3.0 * k - 2.0) * (k - 6.0) * (3.0 * k * k + 4.0 * k + 12.0);
    return (3.0 * k * k - 8.0 * k + 12.0 - std::sqrt(disc)) / 24.0;
}

Ell0Rinf ell0_Rinf(int k, double ell) {
    Ell0Rinf r;
    r.ell0 = ell0(k);
    r.R_inf = R_infimum(k, ell);
    return r;
}

double ell_star(int k) {
    if (k <= 2) return kInfMarker;
    return ell1(k);
}

AdmissibleFlags admissible(int k, double ell) {
    AdmissibleFlags f;
    if (k < 1 || !(ell > 1.0)) return f;
    f.in_K = (k <= 5) || (ell < ell0(k));
    f.in_K1 = f.in_K && (k == 1 ? true : ell < ell1(k));
    f.in_Kstar = f.in_K && (ell < ell_star(k));
    return f;
}

CriticalityRow criticality_row(int k) {
    CriticalityRow row;
    row.k = k;
    row.ell0 = ell0(k);
    row.ell1 = ell1(k);
    row.ell_star = ell_star(k);
    row.eps_star_at_ell1 =
        (k >= 2 && std::isfinite(row.ell1)) ? epsilon_star(k, row.ell1) : kInfMarker;
    return row;
}

double ell_star3_threshold() { return (76.0 - 4.0 * std::sqrt(154.0)) / 23.0; }

BetaGapReport beta_gap(const ParamSet& p) {
    BetaGapReport r;
    r.beta = p.beta;
    r.ell_plus_1 = p.ell + 1.0;
    r.satisfied = p.beta > p.ell + 1.0;
    r.condition_holds = p.k > p.ell * (p.gamma + 1.0);
    if (p.k == 4)
        r.applicable = p.ell < ell1(4);
    else if (p.k == 3)
        r.applicable = p.ell < ell_star3_threshold();
    return r;
}

}  // namespace implode
