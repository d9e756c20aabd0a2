#pragma once

#include "implode/errors.hpp"

namespace implode {

// Scalar parameter bundle for the self-similar flow. k = d-1 is the spatial
// dimension minus one, ell > 1 the inverse squared sound speed, and gamma
// parametrizes the similarity exponent through m = k/(gamma+1),
// beta = m(ell+1)/ell.
struct ParamSet {
    int k = 0;
    double ell = 0;
    double gamma = 0;
    double m = 0;
    double beta = 0;
    double eps = 0;  // ell*gamma^2 - 1
    double A = 0;    // k+2 - (k-2*ell)*gamma
    double B = 0;    // 2k+1 - ell
    double mu = 0;   // (k+2)^2 - (k-2*ell)^2/ell
};

// Linearization data at the sonic point Q1(z=0, u=eps).
struct SonicData {
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;  // partial derivatives of the field at Q1
    double lam_plus = 0, lam_minus = 0;     // eigenvalues, both > 0
    double delta = 0;                       // = lam_minus
    double R = 0;                           // lam_plus / lam_minus
    double a1 = 0;                          // slope of the smooth branch at Q1
};

// Low-order Taylor coefficients at Q1 and the derived barrier constants.
struct CoeffTable {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    double B0 = 0, B1 = 0, B2 = 0, B3 = 0, B4 = 0;
    double M1 = 0;   // a4 - 1
    double M2 = 0;   // (4-R)^(-5/4)
    double M = 0;    // a3^2/(4*a2)
    double xi1 = 0;  // -eps/a1
    double xi2 = 0;  // -a2/a3
};

// Closed forms at k=2 used as an independent oracle for the recurrence route.
struct Lem8Values {
    double eps = 0, delta = 0, a1 = 0, A = 0, a2 = 0;
};

ParamSet derive_params(int k, double ell, double gamma);

// The eigenvalue ratio R > 1 solving (R+1)^2/R = [(k+2)l*g - (k-2l)]^2 / (2kl(l*g^2-1)).
double ratio_R(const ParamSet& p);

// Infimum of R over gamma in Gamma(k, ell) = {gamma > 1/sqrt(ell) : A > 0}.
double R_infimum(int k, double ell);

// Inverse of gamma -> R on Gamma(k, ell); R must exceed R_infimum(k, ell).
double gamma_from_R(int k, double ell, double R);

SonicData sonic_data(const ParamSet& p);

// a2..a4 by the closed recurrences, plus the B_i, M_i, xi_i constants.
// Requires R away from the poles {2,3,4}.
CoeffTable b_constants(const ParamSet& p, const SonicData& s);

// Explicit radical expressions for k=2, ell>1, R>2.
Lem8Values lem8_closed_forms(double ell, double R);

}  // namespace implode
