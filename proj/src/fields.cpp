#include "implode/fields.hpp"

#include <cmath>

namespace implode {

double poly_eval(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

double poly_eval_deriv(std::span<const double> coeffs, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * double(i);
    return acc;
}

std::pair<double, double> field_Zv(ZvPoint p, const ParamSet& ps) {
    const double Z = p.Z, v = p.v;
    const double one_mv2 = 1.0 - v * v;
    const double one_mZv = 1.0 - Z * v;
    const double Dv = one_mv2 * (ps.m * one_mv2 * Z - ps.k * v * one_mZv);
    const double DZ = Z * (one_mZv * one_mZv - ps.ell * (v - Z) * (v - Z));
    return {Dv, DZ};
}

double f_of_z(double z, const ParamSet& ps) { return -ps.eps - ps.A * z + ps.B * z * z; }

std::pair<double, double> field_zu(ZuPoint q, const ParamSet& ps) {
    const double z = q.z, u = q.u;
    const double f = f_of_z(z, ps);
    const double Du = 2.0 * u * (u + f + ps.k * z * (1.0 - z));
    const double Dz = ((ps.k + 1.0) * z - 1.0) * u + (z - 1.0) * f;
    return {Du, Dz};
}

Landmarks landmarks(const ParamSet& ps) {
    Landmarks l;
    const double sl = std::sqrt(ps.ell);
    l.Z1 = ps.k * sl / (ps.ell * (ps.k - ps.m) + ps.m);
    l.v1 = ps.m / ((ps.k - ps.m) * sl);
    l.Ze = ps.k / (2.0 * std::sqrt((ps.k - ps.m) * ps.m));
    l.zg = (1.0 - sl * ps.gamma) / (sl + 1.0);
    l.zg_minus = -(1.0 + sl * ps.gamma) / (sl - 1.0);
    l.zQ0 = 1.0 / (ps.k + 1.0);
    return l;
}

double curve_eval(Curve c, double x, const ParamSet& ps) {
    const double k = ps.k, m = ps.m, ell = ps.ell;
    const double sl = std::sqrt(ell);
    switch (c) {
        case Curve::u_p:
            return (k - ps.B) * x * x + (ps.A - k) * x + ps.eps;
        case Curve::u_b: {
            const double den = 1.0 - (k + 1.0) * x;
            if (std::abs(den) < 1e-14) throw domain_error("curve_eval: u_b pole at z=1/(k+1)");
            return (ps.eps + (ps.A - ps.eps) * x - (ps.A + ps.B) * x * x + ps.B * x * x * x) /
                   den;
        }
        case Curve::u_g:
            return ps.eps + 2.0 * (1.0 + ell * ps.gamma) * x + (ell - 1.0) * x * x;
        case Curve::f:
            return f_of_z(x, ps);
        case Curve::v1:
        case Curve::v2: {
            const double disc = k * k - 4.0 * (k - m) * m * x * x;
            if (disc < 0) throw domain_error("curve_eval: |Z| beyond Z_e");
            if (c == Curve::v1)  // regular at Z=0 in this form
                return 2.0 * m * x / (k + std::sqrt(disc));
            if (x == 0.0) throw domain_error("curve_eval: v2 undefined at Z=0");
            return (k + std::sqrt(disc)) / (2.0 * (k - m) * x);
        }
        case Curve::v_plus:
            return (sl * x + 1.0) / (x + sl);
        case Curve::v_minus:
            return (-sl * x + 1.0) / (x - sl);
        case Curve::Z_b:
            return k * x / (m + (k - m) * x * x);
        case Curve::Z_g:
            return (sl * x + 1.0) / (x + sl);
    }
    throw domain_error("curve_eval: unknown curve");
}

double L_apply(std::span<const double> u_poly, double z, const ParamSet& ps) {
    const double u = poly_eval(u_poly, z);
    const double du = poly_eval_deriv(u_poly, z);
    const auto [Du, Dz] = field_zu({z, u}, ps);
    return -Dz * du + Du;
}

BarrierPoly barrier_poly(Barrier b, const ParamSet& ps, const SonicData& s, const CoeffTable& c) {
    BarrierPoly out;
    const double eps = ps.eps;
    switch (b) {
        case Barrier::u1:
            out.coeffs = {eps, c.a1};
            break;
        case Barrier::u2:
            out.coeffs = {eps, c.a1, c.a2};
            break;
        case Barrier::u3:
            out.coeffs = {eps, c.a1, c.a2, c.a3};
            break;
        case Barrier::U1:
            out.coeffs = {eps, c.a1, c.a2, c.a3, c.M1};
            break;
        case Barrier::U2:
            out.coeffs = {eps, c.a1, c.a2, c.a3, 0.5 * c.a4, c.M2};
            break;
        case Barrier::U3:
            out.coeffs = {eps, c.a1, c.a2, c.a3, c.M};
            break;
        case Barrier::U3star:
            out.coeffs = {eps, c.a1, c.a2, c.a3, c.M};
            out.left_coeffs = {eps, c.a1};
            out.breakpoint = 2.0 * c.xi2;
            out.piecewise = true;
            break;
    }
    (void)s;
    return out;
}

double barrier_eval(const BarrierPoly& b, double z) {
    if (b.piecewise && z <= b.breakpoint) return poly_eval(b.left_coeffs, z);
    return poly_eval(b.coeffs, z);
}

}  // namespace implode
