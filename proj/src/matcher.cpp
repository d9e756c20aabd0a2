#include "implode/matcher.hpp"

#include "implode/criticality.hpp"
#include "implode/fields.hpp"
#include "implode/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace implode {

ShotState prepare_shot(int k, double ell, double R, int series_N) {
    ShotState st;
    const double gamma = gamma_from_R(k, ell, R);
    st.params = derive_params(k, ell, gamma);
    st.sonic = sonic_data(st.params);
    st.q1 = q1_series(st.params, st.sonic, series_N);
    st.p0 = p0_series(st.params, series_N);
    return st;
}

namespace {

// Largest Z at which the origin series still resolves v to ~1e-13, kept safely
// inside the sonic radius and with Psi_z above the requested abscissa.
double choose_seed_Z(const ShotState& st, double zeta) {
    const auto lm = landmarks(st.params);
    double Z = std::min(std::sqrt(std::max(st.p0.radius_estimate, 1e-12)) * 0.95, 0.6 * lm.Z1);
    for (int it = 0; it < 200; ++it) {
        const auto ev = eval_series(st.p0, Z * Z, 1e-13);
        const double tail_v = std::abs(Z) * ev.tail_bound;
        if (tail_v < 1e-13) break;
        Z *= 0.9;
    }
    // Keep the matching event ahead of the seed.
    auto psi_z = [&](double Zq) {
        const double v = p0_v(st.p0, Zq);
        const double g = st.params.gamma;
        return ((1.0 + g * v * v) * Zq - (1.0 + g) * v) / (Zq * (1.0 - v * v));
    };
    for (int it = 0; it < 100 && psi_z(Z) <= zeta * 1.02 + 1e-12; ++it) Z *= 0.5;
    return Z;
}

double u_F_from_state(const ShotState& st, double zeta, const OdeControl& ctrl) {
    const auto lm = landmarks(st.params);
    const double Zs = choose_seed_Z(st, zeta);
    const double vs = p0_v(st.p0, Zs);

    EventSpec ev{"psi_z_equals", event_psi_z_equals(zeta, st.params), true};
    const auto traj =
        integrate(make_rhs_Zv(st.params), Zs, vs, lm.Z1 * (1.0 - 1e-9), ctrl, {&ev, 1});
    if (traj.termination != Trajectory::Termination::event)
        throw event_missed("u_F_at: Psi_z never reached zeta before the sonic point");
    const auto q = psi({traj.stop_event.x, traj.stop_event.y}, st.params);
    return q.u;
}

// Matching abscissa per R. The factor multiplies the (already damped) radius
// estimate; smaller factors degrade d(u_L - u_F)/dR like zeta^R and make the
// located root hypersensitive to integration error.
double zeta_policy(int k, const ShotState& st) {
    return std::min(0.8 * st.q1.radius_estimate, 0.8 / (k + 1.0));
}

}  // namespace

double u_F_at(double zeta, double R, int k, double ell, const OdeControl& ctrl) {
    if (!(zeta > 0.0) || !(zeta < 1.0 / (k + 1.0)))
        throw domain_error("u_F_at: zeta outside (0, 1/(k+1))");
    const auto st = prepare_shot(k, ell, R);
    return u_F_from_state(st, zeta, ctrl);
}

double u_L_at(double zeta, double R, int k, double ell, int series_N) {
    const auto st = prepare_shot(k, ell, R, series_N);
    const auto ev = eval_series(st.q1, zeta, 1e-10);
    return ev.value;
}

std::pair<double, double> default_bracket(int k, double ell) {
    double lo = 3.0 + 1e-3;
    double hi = 4.0 - 1e-3;
    if (k == 2) {
        const double l1 = ell1(2);
        if (ell >= l1) hi = std::min(4.0 - 1.0 / ell, 100.0 / 27.0) - 1e-6;
    }
    return {lo, hi};
}

MatchResult find_R0(int k, double ell, const MatchConfig& cfg) {
    const auto flags = admissible(k, ell);
    if (!flags.in_Kstar) {
        std::ostringstream os;
        os << "find_R0: (k, ell) = (" << k << ", " << ell << ") outside the admissible set";
        if (k >= 2) os << " (ell_* = " << ell_star(k) << ")";
        throw domain_error(os.str());
    }

    auto [lo, hi] = cfg.bracket;
    const bool auto_bracket = (lo == 0.0 && hi == 0.0);
    if (auto_bracket) std::tie(lo, hi) = default_bracket(k, ell);

    // g(R) = u_L(zeta; R) - u_F(zeta; R) with zeta chosen per R.
    auto g_of = [&](double R) {
        const auto st = prepare_shot(k, ell, R, cfg.series_N);
        const double zeta = cfg.zeta > 0.0 ? cfg.zeta : zeta_policy(k, st);
        const auto ul = eval_series(st.q1, zeta, cfg.tol_residual / 10.0);
        if (!ul.tail_ok) throw radius_error("find_R0: series tail too large at zeta");
        const double uf = u_F_from_state(st, zeta, cfg.ode);
        return ul.value - uf;
    };

    MatchResult res;
    const int n = std::max(cfg.scan_points, 3);
    std::vector<double> Rs(n), gs(n);
    std::vector<std::pair<double, double>> brackets;
    // The positive-g region hugs R = 3 when the cubic blow-up amplitude is
    // small (ell near 1); refine the left endpoint toward 3 before giving up.
    for (int attempt = 0; attempt < 5; ++attempt) {
        brackets.clear();
        res.scan.clear();
        for (int i = 0; i < n; ++i) {
            Rs[i] = lo + (hi - lo) * i / (n - 1.0);
            gs[i] = g_of(Rs[i]);
            res.scan.emplace_back(Rs[i], gs[i]);
        }
        for (int i = 0; i + 1 < n; ++i)
            if (gs[i] > 0.0 && gs[i + 1] <= 0.0) brackets.emplace_back(Rs[i], Rs[i + 1]);
        if (!brackets.empty()) break;
        if (auto_bracket && gs[0] < 0.0 && lo - 3.0 > 1e-9) {
            hi = Rs[1];
            lo = 3.0 + (lo - 3.0) / 64.0;
            continue;
        }
        break;
    }
    if (brackets.empty()) {
        std::ostringstream os;
        os << "find_R0: no sign change over [" << lo << ", " << hi << "]; samples:";
        for (int i = 0; i < n; ++i) os << " g(" << Rs[i] << ")=" << gs[i];
        throw no_sign_change(os.str());
    }
    res.multiple_roots = brackets.size() > 1;

    for (auto [a, b] : brackets) {
        double ga = g_of(a);
        while (b - a > cfg.tol_R) {
            const double mid = 0.5 * (a + b);
            const double gm = g_of(mid);
            if ((ga > 0.0) == (gm > 0.0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        res.roots.push_back(0.5 * (a + b));
    }
    res.R0 = *std::min_element(res.roots.begin(), res.roots.end());
    res.residual = g_of(res.R0);
    {
        const auto st = prepare_shot(k, ell, res.R0, cfg.series_N);
        res.zeta_used = cfg.zeta > 0.0 ? cfg.zeta : zeta_policy(k, st);
        res.gamma = st.params.gamma;
    }
    return res;
}

}  // namespace implode
