#pragma once

#include "implode/params.hpp"

#include <vector>

namespace implode {

enum class SeriesKind { P0_phi, Q1_a };

// Taylor series with an empirical convergence-radius estimate. For P0_phi
// the expansion variable is kappa = Z^2 and v(Z) = Z * sum phi_n Z^(2n);
// for Q1_a it is z and u(z) = sum a_n z^n.
struct TaylorSeries {
    double center = 0;
    std::vector<double> coeffs;
    double radius_estimate = 0;
    SeriesKind kind = SeriesKind::Q1_a;
};

struct SeriesEval {
    double value = 0;
    double tail_bound = 0;
    bool tail_ok = true;  // tail_bound < tol * max(1, |value|)
};

// Coefficients phi_n of the regular solution through the origin P0.
TaylorSeries p0_series(const ParamSet& ps, int N);

// Coefficients a_n of the analytic branch through the sonic point Q1.
// Cross-checked against the closed forms for a2..a4.
TaylorSeries q1_series(const ParamSet& ps, const SonicData& s, int N);

// Horner evaluation of the truncation with an empirical geometric tail bound.
SeriesEval eval_series(const TaylorSeries& s, double x, double tol);

// d/dx of the truncated series at x (no tail control).
double eval_series_deriv(const TaylorSeries& s, double x);

// 0.5 / limsup |a_n|^(1/n) over the trailing half of the coefficients.
double radius_estimate(const TaylorSeries& s);

// Helpers for the P0 expansion: v(Z) and v'(Z) from the phi series.
double p0_v(const TaylorSeries& s, double Z);
double p0_dv(const TaylorSeries& s, double Z);

}  // namespace implode
