#pragma once

#include "implode/ode.hpp"
#include "implode/params.hpp"
#include "implode/series.hpp"

#include <utility>
#include <vector>

namespace implode {

struct MatchConfig {
    double zeta = 0.0;  // 0 -> per-R policy min(0.8 * radius_estimate, 0.8/(k+1))
    std::pair<double, double> bracket{0.0, 0.0};  // {0,0} -> default for (k, ell)
    double tol_R = 1e-12;
    double tol_residual = 1e-9;
    int scan_points = 33;
    int series_N = 60;
    OdeControl ode;
};

struct MatchResult {
    double R0 = 0;
    double residual = 0;       // g(R0)
    double zeta_used = 0;      // matching abscissa at R0
    double gamma = 0;          // gamma(k, ell, R0)
    std::vector<double> roots;  // all sign-change locations found by the scan
    std::vector<std::pair<double, double>> scan;  // (R, g(R)) samples
    bool multiple_roots = false;
};

// Bundle of per-R state reused while shooting.
struct ShotState {
    ParamSet params;
    SonicData sonic;
    TaylorSeries q1;
    TaylorSeries p0;
};

ShotState prepare_shot(int k, double ell, double R, int series_N = 60);

// u_F(zeta; R): seed the regular branch from the origin series and integrate
// the Z-v field until Psi_z reaches zeta; returns Psi_u there.
double u_F_at(double zeta, double R, int k, double ell, const OdeControl& ctrl = {});

// u_L(zeta; R): sonic-point series evaluated at +zeta.
double u_L_at(double zeta, double R, int k, double ell, int series_N = 60);

// Default shooting bracket for (k, ell); applies the k=2 large-ell cap.
std::pair<double, double> default_bracket(int k, double ell);

// Locate R0 with g(R) = u_L - u_F changing sign over the bracket.
MatchResult find_R0(int k, double ell, const MatchConfig& cfg = {});

}  // namespace implode
