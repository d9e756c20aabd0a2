#pragma once

#include "implode/params.hpp"

#include <limits>
#include <utility>

namespace implode {

// +infinity markers are represented by this sentinel (and by isinf()).
inline constexpr double kInfMarker = std::numeric_limits<double>::infinity();

struct AdmissibleFlags {
    bool in_K = false;       // R can reach (3,4)
    bool in_K1 = false;      // sign arguments B2>0 / a4<0 hold
    bool in_Kstar = false;   // main construction applies
};

struct CriticalityRow {
    int k = 0;
    double ell0 = kInfMarker;   // +inf for k <= 5
    double ell1 = kInfMarker;   // +inf for k = 1
    double ell_star = kInfMarker;
    double eps_star_at_ell1 = kInfMarker;
};

struct BetaGapReport {
    double beta = 0;
    double ell_plus_1 = 0;
    bool satisfied = false;        // beta > ell + 1
    bool condition_holds = false;  // k > ell*(gamma+1)
    bool applicable = false;       // k in {3,4} inside the proven range
};

// f1(k,eps) = (k+2) sqrt(1+eps) - 4 sqrt(2 k eps / 3)
double f1(int k, double eps);
// f2(k,ell) = k/sqrt(ell) - 2 sqrt(ell)
double f2(int k, double ell);
// f3(k,eps) = (68k+12) eps - (33k+64) sqrt(2k/3) sqrt(eps (1+eps))
double f3(int k, double eps);

// Upper end of the admissible eps interval E_k (inf for k <= 6).
double Ek_upper(int k);

// Range (ell_minus, ell_plus) on which eps_star / F are defined.
std::pair<double, double> ell_range(int k);

// Unique eps in E_k with f1(k,eps) = f2(k,ell).
double epsilon_star(int k, double ell);

// F(k,ell) = f3(k, eps_star(k,ell)) + 52k - 12 ell + 12; strictly decreasing in ell.
double F_value(int k, double ell);

// Root of F(k, .) in (1, ell_plus(k)); +inf marker for k = 1.
double ell1(int k);

// Radical for the k >= 6 admissibility threshold; +inf marker for k <= 5.
double ell0(int k);

// R_infimum re-exported alongside ell0 for a queried ell.
struct Ell0Rinf {
    double ell0 = kInfMarker;
    double R_inf = 0;
};
Ell0Rinf ell0_Rinf(int k, double ell);

double ell_star(int k);

AdmissibleFlags admissible(int k, double ell);

CriticalityRow criticality_row(int k);

// ell^*(3) = (76 - 4 sqrt(154))/23, the threshold in the beta > ell+1 criterion.
double ell_star3_threshold();

BetaGapReport beta_gap(const ParamSet& p);

}  // namespace implode
