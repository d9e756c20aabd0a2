#include "implode/io.hpp"

#include "implode/fields.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace implode {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

nlohmann::json num(double x) {
    // JSON has no inf; emit a string marker.
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

}  // namespace

nlohmann::json profile_header_json(const GlobalProfile& p) {
    const auto lm = landmarks(p.params);
    nlohmann::json j;
    j["k"] = p.params.k;
    j["ell"] = p.params.ell;
    j["gamma"] = p.params.gamma;
    j["m"] = p.params.m;
    j["beta"] = p.params.beta;
    j["eps"] = p.params.eps;
    j["A"] = p.params.A;
    j["B"] = p.params.B;
    j["R0"] = p.R0;
    j["Z1"] = lm.Z1;
    j["v1"] = lm.v1;
    j["v_inf"] = p.v_inf;
    j["rho_star"] = p.has_density ? p.rho_star : 0.0;
    return j;
}

void write_profile_csv(std::ostream& os, const GlobalProfile& p,
                       const std::vector<double>& grid) {
    os << "# " << profile_header_json(p).dump() << "\n";
    os << "Z,v,rho_hat,u0_hat,u_hat\n";
    for (double Z : grid) {
        const auto pt = profile_at(p, Z);
        os << fmt17(Z) << ',' << fmt17(pt.v) << ',' << fmt17(pt.rho_hat) << ','
           << fmt17(pt.u0_hat) << ',' << fmt17(pt.u_hat) << "\n";
    }
}

nlohmann::json profile_json(const GlobalProfile& p, const std::vector<double>& grid) {
    nlohmann::json j;
    j["header"] = profile_header_json(p);
    auto& rows = j["rows"] = nlohmann::json::array();
    for (double Z : grid) {
        const auto pt = profile_at(p, Z);
        rows.push_back({{"Z", Z},
                        {"v", pt.v},
                        {"rho_hat", pt.rho_hat},
                        {"u0_hat", pt.u0_hat},
                        {"u_hat", pt.u_hat}});
    }
    return j;
}

nlohmann::json solve_summary_json(const GlobalProfile& p, const MatchResult& mr) {
    const auto lm = landmarks(p.params);
    nlohmann::json j;
    j["k"] = p.params.k;
    j["ell"] = p.params.ell;
    j["R0"] = mr.R0;
    j["residual"] = mr.residual;
    j["zeta"] = mr.zeta_used;
    j["gamma"] = p.params.gamma;
    j["Z1"] = lm.Z1;
    j["v1"] = lm.v1;
    j["beta"] = p.params.beta;
    j["v_inf"] = p.v_inf;
    j["Z_black"] = p.Z_black;
    j["v_black"] = p.v_black;
    if (p.has_density) j["rho_star"] = p.rho_star;
    j["multiple_roots"] = mr.multiple_roots;
    if (mr.multiple_roots) j["roots"] = mr.roots;
    return j;
}

void write_critical_csv(std::ostream& os, const std::vector<CriticalityRow>& rows) {
    os << "k,ell0,ell1,ell_star,eps_star_at_ell1,R_inf_at_ell1\n";
    for (const auto& r : rows) {
        auto cell = [&](double x) { return std::isinf(x) ? std::string("inf") : fmt17(x); };
        const double Rinf =
            std::isfinite(r.ell1) ? R_infimum(r.k, r.ell1) : R_infimum(r.k, 2.0);
        os << r.k << ',' << cell(r.ell0) << ',' << cell(r.ell1) << ',' << cell(r.ell_star)
           << ',' << cell(r.eps_star_at_ell1) << ',' << fmt17(Rinf) << "\n";
    }
}

nlohmann::json critical_table_json(const std::vector<CriticalityRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        const double Rinf =
            std::isfinite(r.ell1) ? R_infimum(r.k, r.ell1) : R_infimum(r.k, 2.0);
        arr.push_back({{"k", r.k},
                       {"ell0", num(r.ell0)},
                       {"ell1", num(r.ell1)},
                       {"ell_star", num(r.ell_star)},
                       {"eps_star_at_ell1", num(r.eps_star_at_ell1)},
                       {"R_inf_at_ell1", Rinf}});
    }
    return {{"rows", arr}};
}

void write_verify_report(std::ostream& os, const std::vector<VerifyCheck>& checks) {
    for (const auto& c : checks) {
        os << (c.pass ? "PASS" : "FAIL") << " [" << c.suite << "] " << c.lemma
           << "  margin=" << fmt17(c.margin) << "  worst at: " << c.point << "\n";
    }
}

nlohmann::json verify_report_json(const std::vector<VerifyCheck>& checks) {
    auto arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"suite", c.suite},
                       {"lemma", c.lemma},
                       {"point", c.point},
                       {"margin", c.margin},
                       {"pass", c.pass}});
    return {{"checks", arr}};
}

namespace {

void emit_curve(std::ostream& os, const std::string& name,
                const std::vector<std::pair<double, double>>& pts) {
    for (const auto& [x, y] : pts)
        os << "curve," << name << ',' << fmt17(x) << ',' << fmt17(y) << ",,\n";
}

}  // namespace

void write_portrait_csv(std::ostream& os, const ParamSet& ps, const PortraitConfig& cfg) {
    if (!(cfg.x1 > cfg.x0) || !(cfg.y1 > cfg.y0) || cfg.n < 2)
        throw domain_error("write_portrait_csv: empty window");
    os << "type,name,x,y,dx,dy\n";
    const int M = 200;
    auto sample = [&](Curve c, double a, double b, bool as_Z_of_v = false) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i <= M; ++i) {
            const double t = a + (b - a) * i / double(M);
            double val;
            try {
                val = curve_eval(c, t, ps);
            } catch (const error&) {
                continue;
            }
            if (!std::isfinite(val)) continue;
            if (as_Z_of_v) {
                if (val >= cfg.x0 && val <= cfg.x1) pts.emplace_back(val, t);
            } else {
                if (val >= cfg.y0 && val <= cfg.y1) pts.emplace_back(t, val);
            }
        }
        return pts;
    };

    if (!cfg.zu_plane) {
        const auto lm = landmarks(ps);
        const double Ze = lm.Ze;
        emit_curve(os, "v1", sample(Curve::v1, std::max(cfg.x0, -Ze), std::min(cfg.x1, Ze)));
        emit_curve(os, "v2", sample(Curve::v2, std::max(cfg.x0, -Ze), std::min(cfg.x1, Ze)));
        emit_curve(os, "v_plus", sample(Curve::v_plus, cfg.x0, cfg.x1));
        emit_curve(os, "v_minus", sample(Curve::v_minus, cfg.x0, cfg.x1));
        emit_curve(os, "Z_b", sample(Curve::Z_b, cfg.y0, cfg.y1, true));
        emit_curve(os, "Z_g", sample(Curve::Z_g, cfg.y0, cfg.y1, true));
        for (int i = 0; i < cfg.n; ++i) {
            for (int j = 0; j < cfg.n; ++j) {
                const double Z = cfg.x0 + (cfg.x1 - cfg.x0) * (i + 0.5) / cfg.n;
                const double v = cfg.y0 + (cfg.y1 - cfg.y0) * (j + 0.5) / cfg.n;
                const auto [Dv, DZ] = field_Zv({Z, v}, ps);
                const double nrm = std::hypot(DZ, Dv);
                if (nrm < 1e-300) continue;
                os << "dir,," << fmt17(Z) << ',' << fmt17(v) << ',' << fmt17(DZ / nrm) << ','
                   << fmt17(Dv / nrm) << "\n";
            }
        }
    } else {
        emit_curve(os, "u_p", sample(Curve::u_p, cfg.x0, cfg.x1));
        emit_curve(os, "u_b", sample(Curve::u_b, cfg.x0, cfg.x1));
        emit_curve(os, "u_g", sample(Curve::u_g, cfg.x0, cfg.x1));
        for (int i = 0; i < cfg.n; ++i) {
            for (int j = 0; j < cfg.n; ++j) {
                const double z = cfg.x0 + (cfg.x1 - cfg.x0) * (i + 0.5) / cfg.n;
                const double u = cfg.y0 + (cfg.y1 - cfg.y0) * (j + 0.5) / cfg.n;
                const auto [Du, Dz] = field_zu({z, u}, ps);
                const double nrm = std::hypot(Dz, Du);
                if (nrm < 1e-300) continue;
                os << "dir,," << fmt17(z) << ',' << fmt17(u) << ',' << fmt17(Dz / nrm) << ','
                   << fmt17(Du / nrm) << "\n";
            }
        }
    }
}

std::vector<double> parse_grid(const std::string& spec) {
    double a = 0, b = 0;
    int n = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3)
        throw domain_error("parse_grid: expected \"Z0:Z1:n\"");
    if (n < 2 || !(b > a)) throw domain_error("parse_grid: need n >= 2 and Z1 > Z0");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1.0);
    return g;
}

}  // namespace implode
