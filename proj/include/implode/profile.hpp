#pragma once

#include "implode/matcher.hpp"
#include "implode/ode.hpp"
#include "implode/params.hpp"
#include "implode/series.hpp"

#include <array>

namespace implode {

// Piecewise representation of the global solution v(Z) on [0, +inf):
// origin series on [0, Z_a], RK trajectory on [Z_a, Z_wm], sonic-point series
// mapped through Theta on [Z_wm, Z_wp], RK trajectory on [Z_wp, Z_max], and a
// compactified W = 1/Z trajectory beyond Z_max.
struct GlobalProfile {
    ParamSet params;
    SonicData sonic;
    CoeffTable coeffs;
    double R0 = 0;

    TaylorSeries p0;  // phi(kappa), kappa = Z^2
    TaylorSeries q1;  // a_n z^n
    double zeta_use = 0;
    double Z_a = 0, Z_wm = 0, Z_wp = 0, Z_max = 0;

    Trajectory pre;   // [Z_a, Z_wm]
    Trajectory post;  // [Z_wp, Z_max]
    Trajectory tail;  // W from 1/Z_max down to 0

    double v_inf = 0;
    double Z_black = 0, v_black = 0;  // Delta_v sign change (black-curve crossing)
    double seam_c0 = 0, seam_c1 = 0;  // worst seam mismatches (diagnostics)

    bool has_density = false;
    Trajectory Jint;        // I(Z) = int_0^Z J
    Trajectory Jtilde_int;  // Itld(W) = int_W^1 Jtilde
    double rho_star = 0;
    double density_seam = 0;  // two-route relative mismatch at Z_max

    double v(double Z) const;
    double dv_dZ(double Z) const;
    double rho_hat(double Z) const;   // requires density
    double rho_tilde(double W) const;  // requires density
};

struct BuildControl {
    OdeControl ode;
    double Z_max = 10.0;
    double seam_c0_tol = 1e-9;
    double seam_c1_tol = 1e-7;
    int series_N = 60;
};

GlobalProfile build_global_v(int k, double ell, double R0, const BuildControl& ctrl = {});

// J(Z) from the profile: the origin-regular form on [0,1], the Z > 1 form on
// (1, Z_max], and the compactified form beyond.
double eval_J(const GlobalProfile& p, double Z);

// Jtilde(W) = (J(1/W) + m W)/W^2 for W in [0, 1].
double eval_Jtilde(const GlobalProfile& p, double W);

// Density integral, tail integral, rho_star; fills the density fields.
void build_density(GlobalProfile& p, const OdeControl& ctrl = {});

struct ProfilePoint {
    double v = 0, rho_hat = 0, u0_hat = 0, u_hat = 0;
};

ProfilePoint profile_at(const GlobalProfile& p, double Z);

// Least-squares check that v/Z, u_hat/Z, rho_hat, u0_hat are even in Z near 0.
// Coefficients are reported in the window-scaled variable s = Z / window.
struct EvenExtensionReport {
    std::array<double, 4> max_odd_coeff{};  // v/Z, u_hat/Z, rho_hat, u0_hat
    double window = 0;
    bool ok = false;  // all below 1e-8
};

EvenExtensionReport even_extension_check(const GlobalProfile& p);

// Max residual of the two reduced PDEs on an (t, r) grid with T_* = 1,
// derivatives by central differences of step h.
double max_pde_residual(const GlobalProfile& p, int nt, int nr, double h);

// find_R0 + build_global_v (+ density) in one call.
GlobalProfile solve_profile(int k, double ell, const MatchConfig& mcfg = {},
                            const BuildControl& bcfg = {}, bool with_density = true,
                            MatchResult* match_out = nullptr);

}  // namespace implode
