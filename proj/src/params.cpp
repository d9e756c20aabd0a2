#include "implode/params.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace implode {

namespace {

// Larger root of x^2 - t*x + p = 0 computed without cancellation (t > 0).
double larger_root(double t, double p, const char* what) {
    const double disc = t * t - 4.0 * p;
    if (disc < 0)
        throw numerical_error(std::string(what) + ": negative discriminant");
    return 0.5 * (t + std::sqrt(disc));
}

}  // namespace

ParamSet derive_params(int k, double ell, double gamma) {
    if (k < 1) throw domain_error("derive_params: k must be a positive integer");
    if (!(ell > 1.0)) throw domain_error("derive_params: ell must exceed 1");
    if (!(gamma > 1.0 / std::sqrt(ell)))
        throw domain_error("derive_params: gamma must exceed 1/sqrt(ell)");
    ParamSet p;
    p.k = k;
    p.ell = ell;
    p.gamma = gamma;
    p.eps = ell * gamma * gamma - 1.0;
    p.A = k + 2 - (k - 2.0 * ell) * gamma;
    p.B = 2.0 * k + 1.0 - ell;
    p.m = k / (gamma + 1.0);
    p.beta = p.m * (ell + 1.0) / ell;
    p.mu = (k + 2.0) * (k + 2.0) - (k - 2.0 * ell) * (k - 2.0 * ell) / ell;
    return p;
}

double ratio_R(const ParamSet& p) {
    const double num = (p.k + 2.0) * p.ell * p.gamma - (p.k - 2.0 * p.ell);
    const double F = num * num / (2.0 * p.k * p.ell * p.eps);
    // (R+1)^2/R = F  <=>  R^2 + (2-F) R + 1 = 0; keep the root > 1.
    const double G = F - 2.0;
    const double disc = G * G - 4.0;
    if (disc < 0) throw numerical_error("ratio_R: (R+1)^2/R below 4");
    return 0.5 * (G + std::sqrt(disc));
}

double R_infimum(int k, double ell) {
    if (k <= 2.0 * ell) {
        return std::max(k / 2.0, 2.0 / k);
    }
    // Minimum of R over gamma sits at the zero of A; there
    // (R+1)^2/R = ((k+2)^2*ell - (k-2*ell)^2) / (2*k*ell).
    const double F = ((k + 2.0) * (k + 2.0) * ell - (k - 2.0 * ell) * (k - 2.0 * ell)) /
                     (2.0 * k * ell);
    const double G = F - 2.0;
    return 0.5 * (G + std::sqrt(G * G - 4.0));
}

double gamma_from_R(int k, double ell, double R) {
    if (k < 1 || !(ell > 1.0)) throw domain_error("gamma_from_R: need k>=1, ell>1");
    const double Rinf = R_infimum(k, ell);
    if (!(R > Rinf + 1e-10))
        throw bracket_error("gamma_from_R: R below the reachable range; R_inf = " +
                                std::to_string(Rinf),
                            Rinf);

    const double g_lo_limit = 1.0 / std::sqrt(ell);
    double lo = g_lo_limit * (1.0 + 1e-12) + 1e-300;
    double hi;
    if (k > 2.0 * ell) {
        hi = (k + 2.0) / (k - 2.0 * ell) * (1.0 - 1e-12);  // zero of A
    } else {
        // R decreases to R_inf as gamma grows; expand until the residual flips sign.
        hi = std::max(2.0 * g_lo_limit, 1.0);
        while (ratio_R(derive_params(k, ell, hi)) > R) {
            hi *= 2.0;
            if (hi > 1e12)
                throw bracket_error("gamma_from_R: failed to bracket (R too close to R_inf)",
                                    Rinf);
        }
    }

    auto resid = [&](double g) { return ratio_R(derive_params(k, ell, g)) - R; };
    // Guard against lo being numerically past the pole.
    double flo = std::numeric_limits<double>::infinity();
    double fhi = resid(hi);
    if (!(fhi <= 0.0))
        throw bracket_error("gamma_from_R: R below the reachable range on Gamma(k,ell)", Rinf);

    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > 1e-16 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = resid(mid);
        if (fm > 0) {
            a = mid;
            flo = fm;
        } else {
            b = mid;
            fhi = fm;
        }
    }
    double g = 0.5 * (a + b);
    // One secant polish using the bracket endpoints.
    if (std::isfinite(flo) && fhi != flo) {
        const double gs = a - flo * (b - a) / (fhi - flo);
        if (gs > lo && gs < hi && std::abs(resid(gs)) < std::abs(resid(g))) g = gs;
    }
    if (std::abs(resid(g)) > 1e-12 * R)
        throw numerical_error("gamma_from_R: residual above tolerance");
    return g;
}

SonicData sonic_data(const ParamSet& p) {
    SonicData s;
    s.c1 = 2.0 * p.eps;
    s.c2 = -1.0;
    s.c3 = 2.0 * p.eps * (p.k - p.A);
    s.c4 = p.k * p.eps + p.A;

    const double trace = s.c1 + s.c4;           // (k+2)eps + A
    const double det = s.c1 * s.c4 - s.c2 * s.c3;  // 2k eps (1+eps)
    s.lam_plus = larger_root(trace, det, "sonic_data eigenvalues");
    s.lam_minus = det / s.lam_plus;
    s.delta = s.lam_minus;
    s.R = s.lam_plus / s.lam_minus;

    // a1 is the larger root of p0(a) = a^2 - ((k-2)eps + A) a + 2(k-A) eps.
    s.a1 = larger_root((p.k - 2.0) * p.eps + p.A, 2.0 * (p.k - p.A) * p.eps, "sonic_data slope");
    return s;
}

CoeffTable b_constants(const ParamSet& p, const SonicData& s) {
    const double R = s.R, delta = s.delta;
    for (int n = 2; n <= 4; ++n)
        if (std::abs(R - n) < 1e-8)
            throw pole_error("b_constants: R within guard radius of " + std::to_string(n));

    CoeffTable c;
    const double k = p.k, A = p.A, B = p.B, eps = p.eps;
    c.a1 = s.a1;
    c.B0 = (k - 2.0) * c.a1 + 2.0 * A - 4.0 * k;
    c.a2 = ((k - 1.0) * c.a1 * c.a1 - (-A + B + 2.0 * k) * c.a1 + 2.0 * (k - B) * eps) /
           ((R - 2.0) * delta);
    c.B1 = (3.0 * k - 1.0) * c.a1 - 2.0 * c.a2 - 2.0 * (k + B);
    c.a3 = (c.B1 * c.a2 + (p.ell - 1.0) * c.a1) / ((R - 3.0) * delta);
    c.B2 = -5.0 * c.a2 + 4.0 * k * c.a1 - (2.0 * k + A + 3.0 * B);
    c.a4 = (c.B2 * c.a3 + 2.0 * k * c.a2 * (c.a2 + 1.0)) / ((R - 4.0) * delta);
    c.B3 = 3.0 * c.a3 - (5.0 * k + 1.0) * c.a2 - B - 2.0 * k;
    c.B4 = 6.0 * c.a2 - (5.0 * k + 1.0) * c.a1 + 2.0 * A + 4.0 * B + 2.0 * k;
    c.M1 = c.a4 - 1.0;
    c.M2 = std::pow(4.0 - R, -1.25);
    c.M = c.a3 * c.a3 / (4.0 * c.a2);
    c.xi1 = -eps / c.a1;
    c.xi2 = -c.a2 / c.a3;

    // Cross-check a2 against the eliminated form of the same recurrence.
    const double a2_alt =
        (((k - 3.0) * R + 1.0) * c.a1 + 3.0 * A * R - (2.0 * k + B) * R) / (R - 2.0);
    if (std::abs(a2_alt - c.a2) > 1e-10 * std::max(1.0, std::abs(c.a2)))
        throw numerical_error("b_constants: a2 routes disagree");
    return c;
}

Lem8Values lem8_closed_forms(double ell, double R) {
    if (!(ell > 1.0)) throw domain_error("lem8_closed_forms: need ell > 1");
    if (!(R > 2.0)) throw domain_error("lem8_closed_forms: need R > 2");
    const double r1 = R - 1.0;
    const double r1_2 = r1 * r1, r1_3 = r1_2 * r1, r1_4 = r1_2 * r1_2;
    const double L1 = (ell - 1.0) * (ell - 1.0) / ell;
    const double L2 = (ell - 1.0) / ell;
    const double S = std::sqrt(R * (ell - 1.0) * (ell - 1.0) + ell * r1_2);
    const double Q = R * R + 6.0 * R + 1.0;

    Lem8Values v;
    v.eps = R * Q / r1_4 * L1 + 4.0 * R / r1_2 + 4.0 * R * (R + 1.0) / r1_4 * L2 * S;
    v.delta = 8.0 * R * (R + 1.0) / r1_4 * L1 + 4.0 * (R + 1.0) / r1_2 + 2.0 * Q / r1_4 * L2 * S;
    v.a1 = 2.0 * R * (3.0 * R + 1.0) / r1_3 * L1 + 4.0 * R / r1 +
           2.0 * R * (R + 3.0) / r1_3 * L2 * S;
    v.A = 4.0 * R / r1_2 * L1 + 4.0 + 2.0 * (R + 1.0) / r1_2 * L2 * S;
    v.a2 = (2.0 * R * (3.0 * R - 1.0) / r1_2 * L1 + 4.0 * R * R / r1_2 * L2 * S +
            R * (ell - 1.0)) /
           (R - 2.0);
    return v;
}

}  // namespace implode
