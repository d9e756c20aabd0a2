// Command-line surface: critical-exponent tables, end-to-end solves, profile
// export, phase-portrait data, and the inequality verification suites.

#include "implode/criticality.hpp"
#include "implode/io.hpp"
#include "implode/matcher.hpp"
#include "implode/profile.hpp"
#include "implode/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitNumerical = 4;

int log_level() {
    const char* env = std::getenv("IMPLODE_LOG");
    if (!env) return 0;
    const std::string s = env;
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[implode] " << msg << "\n";
}

// stdout unless --out was given
struct OutStream {
    std::ofstream file;
    std::ostream& get(const std::string& path) {
        if (path.empty()) return std::cout;
        file.open(path);
        if (!file) throw implode::domain_error("cannot open output file: " + path);
        return file;
    }
};

std::pair<int, int> parse_k_range(const std::string& spec) {
    int a = 0, b = 0;
    if (std::sscanf(spec.c_str(), "%d..%d", &a, &b) == 2) return {a, b};
    if (std::sscanf(spec.c_str(), "%d", &a) == 1) return {a, a};
    throw CLI::ValidationError("--k", "expected an integer or a range like 2..6");
}

int cmd_critical(const std::string& kspec, const std::string& fmt, const std::string& out) {
    const auto [k_lo, k_hi] = parse_k_range(kspec);
    if (k_lo < 1 || k_hi < k_lo) throw CLI::ValidationError("--k", "need 1 <= k_lo <= k_hi");
    std::vector<implode::CriticalityRow> rows;
    for (int k = k_lo; k <= k_hi; ++k) {
        log_info("criticality row k=" + std::to_string(k));
        rows.push_back(implode::criticality_row(k));
    }
    OutStream os;
    auto& s = os.get(out);
    if (fmt == "json")
        s << implode::critical_table_json(rows).dump(2) << "\n";
    else
        implode::write_critical_csv(s, rows);
    return kExitOk;
}

void reject_if_inadmissible(int k, double ell) {
    const auto flags = implode::admissible(k, ell);
    if (!flags.in_Kstar) {
        std::ostringstream msg;
        msg << "(k, ell) = (" << k << ", " << ell << ") rejected:";
        if (!flags.in_K)
            msg << " outside K (k >= 6 needs ell < ell0(k) = " << implode::ell0(k) << ")";
        else
            msg << " outside K* (needs ell < ell_*(" << k << ") = " << implode::ell_star(k)
                << ")";
        throw implode::domain_error(msg.str());
    }
}

int cmd_solve(int k, double ell, double rtol, double atol, const std::string& out) {
    reject_if_inadmissible(k, ell);
    implode::MatchConfig mcfg;
    mcfg.ode.rtol = rtol;
    mcfg.ode.atol = atol;
    implode::BuildControl bcfg;
    bcfg.ode = mcfg.ode;
    implode::MatchResult mr;
    log_info("shooting in R");
    const auto gp = implode::solve_profile(k, ell, mcfg, bcfg, true, &mr);
    OutStream os;
    os.get(out) << implode::solve_summary_json(gp, mr).dump(2) << "\n";
    return kExitOk;
}

int cmd_profile(int k, double ell, const std::string& grid_spec, double rtol, double atol,
                const std::string& fmt, const std::string& out) {
    reject_if_inadmissible(k, ell);
    const auto grid = implode::parse_grid(grid_spec);
    implode::MatchConfig mcfg;
    mcfg.ode.rtol = rtol;
    mcfg.ode.atol = atol;
    implode::BuildControl bcfg;
    bcfg.ode = mcfg.ode;
    const auto gp = implode::solve_profile(k, ell, mcfg, bcfg, true, nullptr);
    OutStream os;
    auto& s = os.get(out);
    if (fmt == "json")
        s << implode::profile_json(gp, grid).dump(2) << "\n";
    else
        implode::write_profile_csv(s, gp, grid);
    return kExitOk;
}

int cmd_portrait(const std::string& plane, int k, double ell, double m, double gamma, double R,
                 const std::string& window, int n, const std::string& out) {
    const int given = (m > 0) + (gamma > 0) + (R > 0);
    if (given != 1)
        throw CLI::ValidationError("--m/--gamma/--R", "give exactly one of the three");
    if (m > 0) gamma = k / m - 1.0;
    if (R > 0) gamma = implode::gamma_from_R(k, ell, R);
    const auto ps = implode::derive_params(k, ell, gamma);

    implode::PortraitConfig cfg;
    cfg.zu_plane = (plane == "zu");
    cfg.n = n;
    if (std::sscanf(window.c_str(), "%lf:%lf:%lf:%lf", &cfg.x0, &cfg.x1, &cfg.y0, &cfg.y1) != 4)
        throw CLI::ValidationError("--window", "expected \"x0:x1:y0:y1\"");
    if (!(cfg.x1 > cfg.x0) || !(cfg.y1 > cfg.y0))
        throw CLI::ValidationError("--window", "empty window");
    OutStream os;
    implode::write_portrait_csv(os.get(out), ps, cfg);
    return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& fmt, const std::string& out) {
    const auto checks = implode::run_suite(suite);
    OutStream os;
    auto& s = os.get(out);
    if (fmt == "json")
        s << implode::verify_report_json(checks).dump(2) << "\n";
    else
        implode::write_verify_report(s, checks);
    int failures = 0;
    for (const auto& c : checks)
        if (!c.pass) ++failures;
    return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar imploding flow profiles of the relativistic Euler equations"};
    app.require_subcommand(1);

    auto* crit = app.add_subcommand("critical-ell", "critical exponent table over k");
    std::string kspec = "2..6", fmt = "csv", out;
    crit->add_option("--k", kspec, "k or range k0..k1");
    crit->add_option("--format", fmt)->check(CLI::IsMember({"csv", "json"}));
    crit->add_option("--out", out, "output path (default stdout)");

    auto* solve = app.add_subcommand("solve", "find R0 and assemble the global profile");
    int k = 0;
    double ell = 0, rtol = 1e-11, atol = 1e-11;
    solve->add_option("--k", k)->required();
    solve->add_option("--ell", ell)->required();
    solve->add_option("--rtol", rtol);
    solve->add_option("--atol", atol);
    std::string solve_out;
    solve->add_option("--out", solve_out);

    auto* prof = app.add_subcommand("profile", "export (Z, v, rho_hat, u0_hat, u_hat) rows");
    int pk = 0;
    double pell = 0, prt = 1e-11, pat = 1e-11;
    std::string grid = "0:5:101", pfmt = "csv", pout;
    prof->add_option("--k", pk)->required();
    prof->add_option("--ell", pell)->required();
    prof->add_option("--grid", grid, "Z0:Z1:n");
    prof->add_option("--rtol", prt);
    prof->add_option("--atol", pat);
    prof->add_option("--format", pfmt)->check(CLI::IsMember({"csv", "json"}));
    prof->add_option("--out", pout);

    auto* port = app.add_subcommand("portrait", "nullclines and direction field samples");
    std::string plane = "Zv", window, port_out;
    int ok = 0, n = 25;
    double oell = 0, om = -1, ogamma = -1, oR = -1;
    port->add_option("--plane", plane)->check(CLI::IsMember({"Zv", "zu"}));
    port->add_option("--k", ok)->required();
    port->add_option("--ell", oell)->required();
    port->add_option("--m", om, "mass-like parameter (gamma = k/m - 1)");
    port->add_option("--gamma", ogamma);
    port->add_option("--R", oR, "eigenvalue ratio (gamma derived)");
    port->add_option("--window", window, "x0:x1:y0:y1")->required();
    port->add_option("--n", n, "direction samples per axis");
    port->add_option("--out", port_out);

    auto* ver = app.add_subcommand("verify", "inequality ledger suites");
    std::string suite = "all", vfmt = "text", vout;
    ver->add_option("--suite", suite);
    ver->add_option("--format", vfmt)->check(CLI::IsMember({"text", "json"}));
    ver->add_option("--out", vout);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (crit->parsed()) return cmd_critical(kspec, fmt, out);
        if (solve->parsed()) return cmd_solve(k, ell, rtol, atol, solve_out);
        if (prof->parsed()) return cmd_profile(pk, pell, grid, prt, pat, pfmt, pout);
        if (port->parsed())
            return cmd_portrait(plane, ok, oell, om, ogamma, oR, window, n, port_out);
        if (ver->parsed()) return cmd_verify(suite, vfmt, vout);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const implode::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInadmissible;
    } catch (const implode::error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
