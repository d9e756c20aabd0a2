#pragma once

#include "implode/params.hpp"

#include <span>
#include <utility>
#include <vector>

namespace implode {

struct ZvPoint {
    double Z = 0, v = 0;
};

struct ZuPoint {
    double z = 0, u = 0;
};

// Named landmarks of the two phase planes.
struct Landmarks {
    double Z1 = 0, v1 = 0;  // sonic point P1
    double Ze = 0;          // k / (2 sqrt((k-m) m)), right end of the v1/v2 branches
    double zg = 0;          // right root of u_g
    double zg_minus = 0;    // left root of u_g
    double zQ0 = 0;         // 1/(k+1), abscissa of Q0
};

// Right-hand sides of the two phase-plane ODEs; returned as (numerator, denominator).
std::pair<double, double> field_Zv(ZvPoint p, const ParamSet& ps);  // (Dv, DZ)
std::pair<double, double> field_zu(ZuPoint q, const ParamSet& ps);  // (Du, Dz)

// f(z) = -eps - A z + B z^2
double f_of_z(double z, const ParamSet& ps);

enum class Curve { u_p, u_b, u_g, f, v1, v2, v_plus, v_minus, Z_b, Z_g };

double curve_eval(Curve c, double x, const ParamSet& ps);

Landmarks landmarks(const ParamSet& ps);

// Quasi-linear operator L(u)(z) = -Delta_z(z,u) u'(z) + Delta_u(z,u) applied to a
// polynomial with the given coefficients (coeffs[i] multiplies z^i).
double L_apply(std::span<const double> u_poly, double z, const ParamSet& ps);

enum class Barrier { u1, u2, u3, U1, U2, U3, U3star };

// Barrier polynomial; U3star is piecewise with the breakpoint at 2*xi2.
struct BarrierPoly {
    std::vector<double> coeffs;       // polynomial on [breakpoint, 0] (or everywhere)
    std::vector<double> left_coeffs;  // polynomial on (-inf, breakpoint]; empty if not piecewise
    double breakpoint = 0;
    bool piecewise = false;
};

BarrierPoly barrier_poly(Barrier b, const ParamSet& ps, const SonicData& s, const CoeffTable& c);

double barrier_eval(const BarrierPoly& b, double z);

double poly_eval(std::span<const double> coeffs, double x);
double poly_eval_deriv(std::span<const double> coeffs, double x);

}  // namespace implode
