#include "implode/profile.hpp"

#include "implode/criticality.hpp"
#include "implode/fields.hpp"
#include "implode/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace implode {

namespace {

struct ThetaJet {
    double Z, v, dZdz, dvdz;
};

// Theta along the sonic-series curve (z, u_L(z)) with first derivatives in z.
ThetaJet theta_jet(double z, const TaylorSeries& q1, const ParamSet& ps) {
    const double u = eval_series(q1, z, 1e-9).value;
    const double du = eval_series_deriv(q1, z);
    const double g = ps.gamma;
    const double omz = 1.0 - z;
    const double w = std::sqrt(u + omz * omz);
    const double D = u + (1.0 + g) * omz;

    ThetaJet j;
    j.Z = (1.0 + g) * w / D;
    j.v = omz / w;
    const double dw_dz = -omz / w;
    const double dw_du = 0.5 / w;
    const double dThZ_dz = (1.0 + g) * (dw_dz * D + (1.0 + g) * w) / (D * D);
    const double dThZ_du = (1.0 + g) * (dw_du * D - w) / (D * D);
    const double dThv_dz = -u / (w * w * w);
    const double dThv_du = -0.5 * omz / (w * w * w);
    j.dZdz = dThZ_dz + dThZ_du * du;
    j.dvdz = dThv_dz + dThv_du * du;
    return j;
}

// Invert the strictly decreasing map z -> Theta_Z(z, u_L(z)) on [-zeta, zeta].
double z_of_Z(double Z, double zeta, const TaylorSeries& q1, const ParamSet& ps) {
    double a = -zeta, b = zeta;  // Z(a) >= Z >= Z(b)
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double Zm = theta_jet(mid, q1, ps).Z;
        if (std::abs(b - a) < 4e-17) break;
        if (Zm > Z)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double seed_Z_for_profile(const TaylorSeries& p0, double Z_cap) {
    double Z = std::min(std::sqrt(std::max(p0.radius_estimate, 1e-12)) * 0.95, Z_cap);
    for (int it = 0; it < 200; ++it) {
        const auto ev = eval_series(p0, Z * Z, 1e-13);
        if (std::abs(Z) * ev.tail_bound < 1e-13) break;
        Z *= 0.9;
    }
    return Z;
}

}  // namespace

double GlobalProfile::v(double Z) const {
    if (Z < 0) throw domain_error("profile: Z must be >= 0");
    if (Z <= Z_a) return p0_v(p0, Z);
    if (Z <= Z_wm) return pre.eval(Z);
    if (Z < Z_wp) {
        const double z = z_of_Z(Z, zeta_use, q1, params);
        return theta_jet(z, q1, params).v;
    }
    if (Z <= Z_max) return post.eval(Z);
    return tail.eval(1.0 / Z);
}

double GlobalProfile::dv_dZ(double Z) const {
    if (Z < 0) throw domain_error("profile: Z must be >= 0");
    if (Z <= Z_a) return p0_dv(p0, Z);
    if (Z > Z_wm && Z < Z_wp) {
        const double z = z_of_Z(Z, zeta_use, q1, params);
        const auto j = theta_jet(z, q1, params);
        return j.dvdz / j.dZdz;
    }
    if (Z > Z_max) {
        const double W = 1.0 / Z;
        const double vt = tail.eval(W);
        return -W * W * make_rhs_W(params)(W, vt);
    }
    const double vv = (Z <= Z_wm) ? pre.eval(Z) : post.eval(Z);
    const auto [Dv, DZ] = field_Zv({Z, vv}, params);
    return Dv / DZ;
}

GlobalProfile build_global_v(int k, double ell, double R0, const BuildControl& ctrl) {
    GlobalProfile gp;
    const double gamma = gamma_from_R(k, ell, R0);
    gp.params = derive_params(k, ell, gamma);
    gp.sonic = sonic_data(gp.params);
    gp.coeffs = b_constants(gp.params, gp.sonic);
    gp.R0 = R0;
    gp.Z_max = ctrl.Z_max;
    gp.p0 = p0_series(gp.params, ctrl.series_N);
    gp.q1 = q1_series(gp.params, gp.sonic, ctrl.series_N);

    const auto lm = landmarks(gp.params);
    const auto flags = admissible(k, ell);
    const Region post_region = flags.in_K1 ? Region::D2prime : Region::D2doubleprime;

    // Piece 1: origin series up to Z_a.
    gp.Z_a = seed_Z_for_profile(gp.p0, 0.6 * lm.Z1);

    // Sonic window half-width: shrink until the post-sonic start point sits in
    // its trapping region and the pre-sonic seam meets its tolerances.
    gp.zeta_use = std::min(0.5 * gp.q1.radius_estimate, 0.02);
    std::string fail;
    bool placed = false;
    for (int attempt = 0; attempt < 10 && !placed; ++attempt, gp.zeta_use *= 0.5) {
        const double uL = eval_series(gp.q1, -gp.zeta_use, 1e-11).value;
        if (!in_region({-gp.zeta_use, uL}, post_region, gp.params, &gp.coeffs)) {
            fail = "post-sonic point escapes its trapping region (wrong R0?)";
            continue;
        }
        gp.Z_wm = theta_jet(+gp.zeta_use, gp.q1, gp.params).Z;
        gp.Z_wp = theta_jet(-gp.zeta_use, gp.q1, gp.params).Z;
        if (!(gp.Z_a < gp.Z_wm)) {
            fail = "series handoff overlaps the sonic window";
            continue;
        }

        // Piece 2: RK from (Z_a, series) to the window edge, then seam checks
        // of value and slope against the window representation.
        gp.pre =
            integrate(make_rhs_Zv(gp.params), gp.Z_a, p0_v(gp.p0, gp.Z_a), gp.Z_wm, ctrl.ode);
        const auto jet_m = theta_jet(+gp.zeta_use, gp.q1, gp.params);
        const double c0_pre = std::abs(gp.pre.y_back() - jet_m.v);
        const auto [Dv_m, DZ_m] = field_Zv({gp.Z_wm, gp.pre.y_back()}, gp.params);
        const double c1_pre = std::abs(Dv_m / DZ_m - jet_m.dvdz / jet_m.dZdz);
        gp.seam_c0 = c0_pre;
        gp.seam_c1 = c1_pre;
        if (c0_pre > ctrl.seam_c0_tol) {
            fail = "C0 seam mismatch " + std::to_string(c0_pre) +
                   " at the pre-sonic window edge";
            continue;
        }
        if (c1_pre > ctrl.seam_c1_tol) {
            fail = "C1 seam mismatch " + std::to_string(c1_pre) +
                   " at the pre-sonic window edge";
            continue;
        }
        placed = true;
    }
    if (!placed) {
        if (fail.find("region") != std::string::npos)
            throw region_error("build_global_v: " + fail);
        throw seam_error("build_global_v: " + fail);
    }
    gp.zeta_use *= 2.0;  // undo the final loop increment

    // Piece 4: RK from the post-sonic window edge out to Z_max, recording the
    // black-curve crossing.
    const auto jet_p = theta_jet(-gp.zeta_use, gp.q1, gp.params);
    EventSpec black{"delta_v_zero", event_delta_v_zero(gp.params), false};
    gp.post = integrate(make_rhs_Zv(gp.params), gp.Z_wp, jet_p.v, gp.Z_max, ctrl.ode,
                        {&black, 1});
    for (const auto& hit : gp.post.passed) {
        if (hit.name == "delta_v_zero") {
            gp.Z_black = hit.x;
            gp.v_black = hit.y;
            break;
        }
    }
    {
        const auto [Dv_p, DZ_p] = field_Zv({gp.Z_wp, jet_p.v}, gp.params);
        const double c1_post = std::abs(Dv_p / DZ_p - jet_p.dvdz / jet_p.dZdz);
        gp.seam_c1 = std::max(gp.seam_c1, c1_post);
        if (c1_post > ctrl.seam_c1_tol)
            throw seam_error("build_global_v: C1 seam mismatch at the post-sonic window edge");
    }

    // Piece 5: compactified tail from W0 = 1/Z_max down to W = 0.
    const double W0 = 1.0 / gp.Z_max;
    gp.tail = integrate(make_rhs_W(gp.params), W0, gp.post.y_back(), 0.0, ctrl.ode);
    gp.v_inf = gp.tail.y_back();
    if (!(std::abs(gp.v_inf) < 1.0))
        throw region_error("build_global_v: |v_inf| >= 1");
    return gp;
}

double eval_J(const GlobalProfile& p, double Z) {
    const double m = p.params.m, k = p.params.k, ell = p.params.ell;
    if (Z < 0) throw domain_error("eval_J: Z must be >= 0");
    if (Z <= 1.0) {
        const double v = p.v(Z), dv = p.dv_dZ(Z);
        return (m * v * (1.0 - v * v) + ell * dv * (Z - v)) /
               ((1.0 - Z * v) * (1.0 - v * v));
    }
    if (Z <= p.Z_max) {
        const double v = p.v(Z), dv = p.dv_dZ(Z);
        return ((-m + k * v / Z) * (1.0 - v * v) + dv * (1.0 - Z * v)) /
               ((Z - v) * (1.0 - v * v));
    }
    const double W = 1.0 / Z;
    return -m * W + W * W * eval_Jtilde(p, W);
}

double eval_Jtilde(const GlobalProfile& p, double W) {
    if (W < 0.0 || W > 1.0) throw domain_error("eval_Jtilde: W outside [0, 1]");
    const double m = p.params.m, k = p.params.k;
    double vt, dvt;
    if (W < 1.0 / p.Z_max) {
        vt = p.tail.eval(W);
        dvt = make_rhs_W(p.params)(W, vt);
    } else {
        const double Z = 1.0 / W;
        vt = p.v(Z);
        dvt = -Z * Z * p.dv_dZ(Z);
    }
    return ((k - m) * vt * (1.0 - vt * vt) - dvt * (W - vt)) /
           ((1.0 - W * vt) * (1.0 - vt * vt));
}

void build_density(GlobalProfile& p, const OdeControl& ctrl) {
    p.Jint = integrate([&p](double Z, double) { return eval_J(p, Z); }, 0.0, 0.0, p.Z_max, ctrl);
    // Itld(W) = int_W^1 Jtilde, integrated from W = 1 downward.
    p.Jtilde_int = integrate([&p](double W, double) { return -eval_Jtilde(p, W); }, 1.0, 0.0,
                             0.0, ctrl);
    const double le = p.params.ell;
    const double rho1 = std::exp((le + 1.0) / le * p.Jint.eval(1.0));
    const double rho_at_Zmax = std::exp((le + 1.0) / le * p.Jint.y_back());
    const double W0 = 1.0 / p.Z_max;
    const double raw_at_W0 = rho1 * std::exp(p.params.beta / p.params.m * p.Jtilde_int.eval(W0));
    const double seam = rho_at_Zmax * std::pow(p.Z_max, p.params.beta) / raw_at_W0;
    p.density_seam = std::abs(seam - 1.0);
    p.rho_star = rho1 * std::exp(p.params.beta / p.params.m * p.Jtilde_int.y_back()) * seam;
    p.has_density = true;
}

double GlobalProfile::rho_hat(double Z) const {
    if (!has_density) throw domain_error("rho_hat: density not built");
    if (Z < 0) throw domain_error("rho_hat: Z must be >= 0");
    const double le = params.ell;
    if (Z <= Z_max) return std::exp((le + 1.0) / le * Jint.eval(Z));
    return std::pow(Z, -params.beta) * rho_tilde(1.0 / Z);
}

double GlobalProfile::rho_tilde(double W) const {
    if (!has_density) throw domain_error("rho_tilde: density not built");
    const double le = params.ell;
    const double rho1 = std::exp((le + 1.0) / le * Jint.eval(1.0));
    const double raw = rho1 * std::exp(params.beta / params.m * Jtilde_int.eval(W));
    const double W0 = 1.0 / Z_max;
    const double rho_at_Zmax = std::exp((le + 1.0) / le * Jint.y_back());
    const double raw_at_W0 = rho1 * std::exp(params.beta / params.m * Jtilde_int.eval(W0));
    return raw * (rho_at_Zmax * std::pow(Z_max, params.beta) / raw_at_W0);
}

ProfilePoint profile_at(const GlobalProfile& p, double Z) {
    ProfilePoint pt;
    pt.v = p.v(Z);
    pt.rho_hat = p.rho_hat(Z);
    const double s = std::sqrt(1.0 - pt.v * pt.v);
    pt.u0_hat = -1.0 / s;
    pt.u_hat = pt.v / s;
    return pt;
}

namespace {

// Least-squares polynomial fit of degree D-1 on s in [0,1], done in the
// Chebyshev basis (well conditioned) and converted to monomial coefficients.
template <int D>
std::array<double, D> fit_poly(const std::vector<double>& s, const std::vector<double>& y) {
    // monomial coefficients of T_k(2s - 1), k = 0..D-1
    double mono[D][D] = {};
    mono[0][0] = 1.0;
    if constexpr (D > 1) {
        mono[1][0] = -1.0;
        mono[1][1] = 2.0;
    }
    for (int n = 2; n < D; ++n) {
        for (int j = 0; j < D; ++j) mono[n][j] = -mono[n - 2][j] - 2.0 * mono[n - 1][j];
        for (int j = 1; j < D; ++j) mono[n][j] += 4.0 * mono[n - 1][j - 1];
    }
    auto cheb = [&](int k, double sv) {
        const double x = 2.0 * sv - 1.0;
        double t0 = 1.0, t1 = x;
        if (k == 0) return t0;
        for (int i = 1; i < k; ++i) {
            const double t2 = 2.0 * x * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        return t1;
    };
    double ATA[D][D] = {};
    double ATy[D] = {};
    for (std::size_t i = 0; i < s.size(); ++i) {
        double b[D];
        for (int k = 0; k < D; ++k) b[k] = cheb(k, s[i]);
        for (int a = 0; a < D; ++a) {
            ATy[a] += b[a] * y[i];
            for (int bb = 0; bb < D; ++bb) ATA[a][bb] += b[a] * b[bb];
        }
    }
    for (int col = 0; col < D; ++col) {
        int piv = col;
        for (int r = col + 1; r < D; ++r)
            if (std::abs(ATA[r][col]) > std::abs(ATA[piv][col])) piv = r;
        for (int cc = 0; cc < D; ++cc) std::swap(ATA[col][cc], ATA[piv][cc]);
        std::swap(ATy[col], ATy[piv]);
        for (int r = col + 1; r < D; ++r) {
            const double f = ATA[r][col] / ATA[col][col];
            for (int cc = col; cc < D; ++cc) ATA[r][cc] -= f * ATA[col][cc];
            ATy[r] -= f * ATy[col];
        }
    }
    double coef[D];
    for (int r = D - 1; r >= 0; --r) {
        double acc = ATy[r];
        for (int cc = r + 1; cc < D; ++cc) acc -= ATA[r][cc] * coef[cc];
        coef[r] = acc / ATA[r][r];
    }
    std::array<double, D> out{};
    for (int j = 0; j < D; ++j)
        for (int k = 0; k < D; ++k) out[j] += coef[k] * mono[k][j];
    return out;
}

}  // namespace

EvenExtensionReport even_extension_check(const GlobalProfile& p) {
    EvenExtensionReport rep;
    rep.window = std::min(0.05, 0.8 * p.Z_a);
    const int M = 41;
    std::vector<double> s(M);
    std::vector<std::vector<double>> ys(4, std::vector<double>(M));
    const double m_over_k1 = p.params.m / (p.params.k + 1.0);
    // rho_hat on the window by cumulative Simpson of J: the fit must see the
    // smooth function, not interpolation wiggle from the global integral
    double I = 0.0, Zprev = 0.0;
    const double le = p.params.ell;
    for (int i = 0; i < M; ++i) {
        const double Z = rep.window * i / (M - 1.0);
        if (i > 0) {
            const int panels = 8;
            const double h = (Z - Zprev) / panels;
            for (int j = 0; j < panels; ++j) {
                const double a = Zprev + j * h;
                I += h / 6.0 *
                     (eval_J(p, a) + 4.0 * eval_J(p, a + 0.5 * h) + eval_J(p, a + h));
            }
        }
        Zprev = Z;
        s[i] = Z / rep.window;
        const double v = p.v(Z);
        const double sq = std::sqrt(1.0 - v * v);
        ys[0][i] = (Z == 0.0) ? m_over_k1 : v / Z;
        ys[1][i] = (Z == 0.0) ? m_over_k1 : v / (Z * sq);
        ys[2][i] = std::exp((le + 1.0) / le * I);
        ys[3][i] = -1.0 / sq;
    }
    rep.ok = true;
    for (int fidx = 0; fidx < 4; ++fidx) {
        // degree-7 fit so the even Z^6 content does not leak into the odd
        // coefficients of degree <= 5 being checked
        const auto c = fit_poly<8>(s, ys[fidx]);
        const double worst =
            std::max({std::abs(c[1]), std::abs(c[3]), std::abs(c[5])});
        rep.max_odd_coeff[fidx] = worst;
        if (!(worst < 1e-8)) rep.ok = false;
    }
    return rep;
}

double max_pde_residual(const GlobalProfile& p, int nt, int nr, double h) {
    const double ell = p.params.ell, k = p.params.k, beta = p.params.beta;
    const double qexp = ell / (ell + 1.0), pexp = 1.0 / (ell + 1.0);
    struct Flds {
        double F1, F2, G1, G2;
    };
    auto fields_at = [&](double t, double r) {
        const double Z = r / (1.0 - t);
        const auto pt = profile_at(p, Z);
        const double rho = std::pow(1.0 - t, -beta) * pt.rho_hat;
        return Flds{std::pow(rho, qexp) * pt.u0_hat, std::pow(rho, qexp) * pt.u_hat,
                    std::pow(rho, pexp) * pt.u0_hat, std::pow(rho, pexp) * pt.u_hat};
    };
    // 4th-order central stencil at step h: the profile's third derivatives get
    // large near the sonic point, where the plain 3-point truncation error
    // would swamp the residual being measured.
    auto d_dt = [&](double t, double r, auto pick) {
        return (pick(fields_at(t - 2 * h, r)) - 8.0 * pick(fields_at(t - h, r)) +
                8.0 * pick(fields_at(t + h, r)) - pick(fields_at(t + 2 * h, r))) /
               (12.0 * h);
    };
    auto d_dr = [&](double t, double r, auto pick) {
        return (pick(fields_at(t, r - 2 * h)) - 8.0 * pick(fields_at(t, r - h)) +
                8.0 * pick(fields_at(t, r + h)) - pick(fields_at(t, r + 2 * h))) /
               (12.0 * h);
    };
    double worst = 0.0;
    for (int it = 0; it < nt; ++it) {
        const double t = 0.05 + 0.5 * it / (nt - 1.0);
        for (int ir = 0; ir < nr; ++ir) {
            const double r = 0.25 + 1.5 * ir / (nr - 1.0);
            const auto c0 = fields_at(t, r);
            const double pde1 = d_dt(t, r, [](const Flds& f) { return f.F1; }) +
                                d_dr(t, r, [](const Flds& f) { return f.F2; }) +
                                k / r * c0.F2;
            const double pde2 = d_dr(t, r, [](const Flds& f) { return f.G1; }) +
                                d_dt(t, r, [](const Flds& f) { return f.G2; });
            worst = std::max({worst, std::abs(pde1), std::abs(pde2)});
        }
    }
    return worst;
}

GlobalProfile solve_profile(int k, double ell, const MatchConfig& mcfg, const BuildControl& bcfg,
                            bool with_density, MatchResult* match_out) {
    const auto mr = find_R0(k, ell, mcfg);
    if (match_out) *match_out = mr;
    auto gp = build_global_v(k, ell, mr.R0, bcfg);
    if (with_density) build_density(gp, bcfg.ode);
    return gp;
}

}  // namespace implode
