#include "implode/verify.hpp"

#include "implode/criticality.hpp"
#include "implode/fields.hpp"
#include "implode/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace implode {

namespace {

std::string pt_str(int k, double ell, double R, double z = std::nan("")) {
    std::ostringstream os;
    os << "k=" << k << " ell=" << ell << " R=" << R;
    if (!std::isnan(z)) os << " z=" << z;
    return os.str();
}

// Track the worst margin over a grid.
struct Worst {
    double margin = std::numeric_limits<double>::infinity();
    std::string point;
    void update(double m, const std::string& p) {
        if (m < margin) {
            margin = m;
            point = p;
        }
    }
    VerifyCheck check(const std::string& suite, const std::string& lemma) const {
        return {suite, lemma, point, margin, margin > 0.0};
    }
};

const std::vector<double> kRGrid{3.05, 3.25, 3.5, 3.75, 3.95};

std::vector<VerifyCheck> suite_coeff_signs() {
    Worst B0_pos, a2_pos, B1_pos, ratio, a3_pos, a4_neg;
    for (const auto& [k, ell] : k1_grid()) {
        for (double R : kRGrid) {
            const auto p = derive_params(k, ell, gamma_from_R(k, ell, R));
            const auto s = sonic_data(p);
            const auto c = b_constants(p, s);
            const auto where = pt_str(k, ell, R);
            B0_pos.update(c.B0, where);
            a2_pos.update(c.a2, where);
            B1_pos.update(c.B1, where);
            ratio.update(c.a3 / c.a2 - (2.0 * k - 1.0), where);
            a3_pos.update(c.a3, where);
            a4_neg.update(-c.a4, where);
        }
    }
    return {B0_pos.check("coeff-signs", "B0 > 0"),
            a2_pos.check("coeff-signs", "a2 > 0"),
            B1_pos.check("coeff-signs", "B1 > 0"),
            ratio.check("coeff-signs", "a3/a2 > 2k-1"),
            a3_pos.check("coeff-signs", "a3 > 0"),
            a4_neg.check("coeff-signs", "a4 < 0")};
}

std::vector<VerifyCheck> suite_B2_k1() {
    Worst w;
    for (double ell : {1.1, 2.0, 10.0}) {
        for (int i = 0; i <= 20; ++i) {
            const double R = 3.0 + i / 20.0;
            // stay just outside the pole-guard radius of the a3/a4 recurrences
            const double Ruse = std::clamp(R, 3.0 + 2e-8, 4.0 - 2e-8);
            const auto p = derive_params(1, ell, gamma_from_R(1, ell, Ruse));
            const auto c = b_constants(p, sonic_data(p));
            w.update(c.B2, pt_str(1, ell, Ruse));
        }
    }
    return {w.check("B2-positive-k1", "B2 > 0 (k=1)")};
}

std::vector<VerifyCheck> suite_k2_large_ell() {
    Worst M_gt_a4, a3_gt_4a2, a1_lt_2eps, a2_gt_7;
    for (double ell : {2.0, 4.0, 10.0}) {
        const double Rhi = std::min(100.0 / 27.0, 4.0 - 1.0 / ell);
        for (int i = 1; i <= 12; ++i) {
            const double R = 3.0 + (Rhi - 3.0) * i / 13.0;
            const auto p = derive_params(2, ell, gamma_from_R(2, ell, R));
            const auto c = b_constants(p, sonic_data(p));
            const auto where = pt_str(2, ell, R);
            M_gt_a4.update(c.M - c.a4, where);
            a3_gt_4a2.update(c.a3 - 4.0 * c.a2, where);
            a1_lt_2eps.update(2.0 * p.eps - c.a1, where);
            a2_gt_7.update(c.a2 - 7.0, where);
        }
    }
    return {M_gt_a4.check("k2-large-ell", "M > a4"),
            a3_gt_4a2.check("k2-large-ell", "a3 > 4 a2"),
            a1_lt_2eps.check("k2-large-ell", "a1 < 2 eps"),
            a2_gt_7.check("k2-large-ell", "a2 > 7")};
}

std::vector<VerifyCheck> suite_u3_barrier() {
    Worst lu3_neg, f_neg;
    for (const auto& [k, ell] : k1_grid()) {
        for (double R : kRGrid) {
            const auto p = derive_params(k, ell, gamma_from_R(k, ell, R));
            const auto c = b_constants(p, sonic_data(p));
            const double u3[] = {p.eps, c.a1, c.a2, c.a3};
            const double xi1 = c.xi1;
            for (int i = 0; i <= 20; ++i) {
                const double z = xi1 * (1.0 - i / 20.5);  // [-eps/a1, 0) sample
                lu3_neg.update(-L_apply(u3, z, p), pt_str(k, ell, R, z));
            }
            for (int i = 0; i <= 20; ++i) {
                const double z = xi1 * (1.0 - i / 20.0);  // includes both ends
                f_neg.update(-f_of_z(z, p), pt_str(k, ell, R, z));
            }
        }
    }
    return {lu3_neg.check("u3-barrier", "L(u_(3)) < 0 on [-eps/a1, 0)"),
            f_neg.check("u3-barrier", "f < 0 on [-eps/a1, 0]")};
}

std::vector<VerifyCheck> suite_lug_identity() {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<int> kd(1, 6);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Worst w;
    for (int i = 0; i < 1000; ++i) {
        const int k = kd(rng);
        const double ell = 1.05 + 4.0 * ud(rng);
        const double gamma = (1.0 / std::sqrt(ell)) * (1.01 + 3.0 * ud(rng));
        const auto p = derive_params(k, ell, gamma);
        const double z = -1.5 + 3.0 * ud(rng);
        const double ug[] = {p.eps, 2.0 * (1.0 + ell * gamma), ell - 1.0};
        const double got = L_apply(ug, z, p);
        const double want =
            2.0 * k * ell * (1.0 - ell) * z * (gamma + z) * (gamma + z) * (gamma + z);
        const double tol = 1e-12 * (1.0 + std::abs(want));
        w.update(tol - std::abs(got - want), pt_str(k, ell, 0, z));
    }
    return {w.check("lug-identity", "L(u_g) = 2 k l (1-l) z (g+z)^3")};
}

std::vector<VerifyCheck> suite_eigen_identities() {
    Worst rdelta, trace, p0_root, eq439;
    for (const auto& [k, ell] : k1_grid()) {
        for (double R : {3.1, 3.5, 3.9}) {
            const auto p = derive_params(k, ell, gamma_from_R(k, ell, R));
            const auto s = sonic_data(p);
            const auto where = pt_str(k, ell, R);
            const double d1 = s.R * s.delta * s.delta - 2.0 * k * p.eps * (1.0 + p.eps);
            rdelta.update(1e-10 - std::abs(d1) / (2.0 * k * p.eps * (1.0 + p.eps)), where);
            const double d2 = (s.R + 1.0) * s.delta - ((k + 2.0) * p.eps + p.A);
            trace.update(1e-10 - std::abs(d2) / ((k + 2.0) * p.eps + p.A), where);
            const double pa = s.a1 * s.a1 - ((k - 2.0) * p.eps + p.A) * s.a1 +
                              2.0 * (k - p.A) * p.eps;
            p0_root.update(1e-10 - std::abs(pa) / (s.a1 * s.a1), where);
            const double lhs = (k + 2.0) * std::sqrt(1.0 + p.eps) -
                               (1.0 + s.R) * std::sqrt(2.0 * k * p.eps / s.R) -
                               (k - 2.0 * ell) / std::sqrt(ell);
            eq439.update(1e-10 - std::abs(lhs) / ((k + 2.0) * std::sqrt(1.0 + p.eps)), where);
        }
    }
    return {rdelta.check("eigen-identities", "R delta^2 = 2 k eps (1+eps)"),
            trace.check("eigen-identities", "(R+1) delta = (k+2) eps + A"),
            p0_root.check("eigen-identities", "p0(a1) = 0"),
            eq439.check("eigen-identities", "(k+2) sqrt(1+eps) identity")};
}

std::vector<VerifyCheck> suite_renorm_bijection() {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Worst fwd, bwd;
    for (int i = 0; i < 1000; ++i) {
        const int k = 1 + int(ud(rng) * 5.99);
        const double ell = 1.1 + 3.0 * ud(rng);
        const double gamma = (1.0 / std::sqrt(ell)) * (1.05 + 2.0 * ud(rng));
        const auto p = derive_params(k, ell, gamma);
        const double v = 0.05 + 0.90 * ud(rng);
        const double Z = (0.05 + 0.90 * ud(rng)) / v;  // Zv in (0.05, 0.95)
        const auto q = psi({Z, v}, p);
        const auto back = theta(q, p);
        fwd.update(1e-12 - std::max(std::abs(back.Z - Z) / std::max(1.0, Z),
                                    std::abs(back.v - v)),
                   pt_str(k, ell, 0));
        const double z = 1.0 - 2.0 * ud(rng);
        const double u = 0.05 + 10.0 * ud(rng);
        const auto pz = theta({z, u}, p);
        const auto qq = psi(pz, p);
        bwd.update(1e-12 - std::max(std::abs(qq.z - z) / std::max(1.0, std::abs(z)),
                                    std::abs(qq.u - u) / u),
                   pt_str(k, ell, 0));
    }
    return {fwd.check("renorm-bijection", "Theta(Psi) = id on R0"),
            bwd.check("renorm-bijection", "Psi(Theta) = id on D0")};
}

std::vector<VerifyCheck> suite_curve_order() {
    Worst order1, order2, identity;
    for (const auto& [k, ell] : k1_grid()) {
        for (double R : {3.2, 3.8}) {
            const auto p = derive_params(k, ell, gamma_from_R(k, ell, R));
            for (int i = 1; i <= 50; ++i) {
                const double z = i / 51.0 / (k + 1.0);
                const double up = curve_eval(Curve::u_p, z, p);
                const double ug = curve_eval(Curve::u_g, z, p);
                const double ub = curve_eval(Curve::u_b, z, p);
                order1.update(ug - up, pt_str(k, ell, R, z));
                order2.update(ub - ug, pt_str(k, ell, R, z));
            }
            for (int i = 0; i < 6; ++i) {
                const double z = -1.0 + 0.4 * i;
                const double lhs = curve_eval(Curve::u_p, z, p) - curve_eval(Curve::u_g, z, p);
                const double want = -k * z * (z + p.gamma);
                identity.update(1e-11 - std::abs(lhs - want) / (1.0 + std::abs(want)),
                                pt_str(k, ell, R, z));
            }
        }
    }
    return {order1.check("curve-order", "u_p < u_g on (0, 1/(k+1))"),
            order2.check("curve-order", "u_g < u_b on (0, 1/(k+1))"),
            identity.check("curve-order", "u_p - u_g = -k z (z+gamma)")};
}

}  // namespace

std::vector<std::pair<int, double>> k1_grid() {
    return {{1, 1.5}, {1, 3.0}, {1, 10.0}, {2, 1.2}, {2, 1.5},  {2, 1.8},  {3, 1.1},
            {3, 1.3}, {4, 1.1}, {4, 1.2},  {5, 1.1}, {5, 1.15}, {6, 1.05}, {6, 1.1}};
}

std::vector<std::string> suite_names() {
    return {"coeff-signs",  "B2-positive-k1", "k2-large-ell",     "u3-barrier",
            "lug-identity", "eigen-identities", "renorm-bijection", "curve-order"};
}

std::vector<VerifyCheck> run_suite(const std::string& name) {
    using Fn = std::function<std::vector<VerifyCheck>()>;
    const std::pair<std::string, Fn> table[] = {
        {"coeff-signs", suite_coeff_signs},
        {"B2-positive-k1", suite_B2_k1},
        {"k2-large-ell", suite_k2_large_ell},
        {"u3-barrier", suite_u3_barrier},
        {"lug-identity", suite_lug_identity},
        {"eigen-identities", suite_eigen_identities},
        {"renorm-bijection", suite_renorm_bijection},
        {"curve-order", suite_curve_order},
    };
    if (name == "all") {
        std::vector<VerifyCheck> out;
        for (const auto& [n, fn] : table) {
            auto part = fn();
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    for (const auto& [n, fn] : table)
        if (n == name) return fn();
    throw domain_error("run_suite: unknown suite '" + name + "'");
}

}  // namespace implode
