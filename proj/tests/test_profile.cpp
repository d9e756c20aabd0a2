#include "implode/profile.hpp"

#include "implode/criticality.hpp"
#include "implode/fields.hpp"
#include "implode/renorm.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace implode;

namespace {

// one shared (2,2) solve for the whole file
const GlobalProfile& profile22() {
    static GlobalProfile gp = [] {
        BuildControl bc;
        bc.ode.rtol = bc.ode.atol = 1e-12;
        return solve_profile(2, 2.0, {}, bc, true, nullptr);
    }();
    return gp;
}

}  // namespace

TEST_CASE("global v: sonic passage and sign structure") {
    const auto& gp = profile22();
    const auto lm = landmarks(gp.params);

    CHECK(std::abs(gp.v(lm.Z1) - lm.v1) < 1e-8);
    CHECK(gp.seam_c0 < 1e-9);
    CHECK(gp.seam_c1 < 1e-7);

    // Delta_Z(Z, v(Z)) changes sign exactly once, at Z1
    double prev = 1.0;
    int changes = 0;
    double loc = 0;
    for (int i = 1; i <= 2000; ++i) {
        const double Z = 10.0 * i / 2000.0;
        const auto [Dv, DZ] = field_Zv({Z, gp.v(Z)}, gp.params);
        (void)Dv;
        if (i > 1 && DZ * prev < 0.0) {
            ++changes;
            loc = Z;
        }
        prev = DZ;
    }
    CHECK(changes == 1);
    CHECK(std::abs(loc - lm.Z1) < 10.0 / 2000.0 + 1e-9);
    // refine the crossing by bisection
    {
        double a = lm.Z1 - 0.01, b = lm.Z1 + 0.01;
        auto dz = [&](double Z) { return field_Zv({Z, gp.v(Z)}, gp.params).second; };
        REQUIRE(dz(a) > 0.0);
        REQUIRE(dz(b) < 0.0);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (a + b);
            (dz(mid) > 0.0 ? a : b) = mid;
        }
        CHECK(std::abs(0.5 * (a + b) - lm.Z1) < 1e-8);
    }

    // |v| < 1 and v < Z on a grid
    for (int i = 1; i <= 500; ++i) {
        const double Z = 12.0 * i / 500.0;
        const double v = gp.v(Z);
        CHECK(std::abs(v) < 1.0);
        CHECK(v < Z);
    }

    // black-curve crossing inside (Z1, 1) with v in (v1, 1) for this run
    CHECK(gp.Z_black > lm.Z1);
    CHECK(gp.Z_black < 1.0);
    CHECK(gp.v_black > lm.v1);
    CHECK(gp.v_black < 1.0);
    CHECK(std::abs(gp.Z_black - curve_eval(Curve::Z_b, gp.v_black, gp.params)) < 1e-10);

    CHECK(gp.params.beta > 0.0);
    CHECK(gp.params.beta < gp.params.k);
    CHECK(std::abs(gp.v_inf) < 1.0);
}

TEST_CASE("slope at the sonic point matches the mapped series slope") {
    const auto& gp = profile22();
    const auto lm = landmarks(gp.params);
    const double slope = gp.dv_dZ(lm.Z1);
    const double h = 1e-6;
    const double fd = (gp.v(lm.Z1 + h) - gp.v(lm.Z1 - h)) / (2 * h);
    CHECK(std::abs(slope - fd) < 1e-6 * std::max(1.0, std::abs(slope)));
    // chain rule through Theta with u_L'(0) = a1 at z = 0
    CHECK(slope == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("post-sonic barrier compliance in the z-u plane") {
    const auto& gp = profile22();
    const auto flags = admissible(2, 2.0);
    CHECK(!flags.in_K1);  // ell = 2 > ell1(2): the k=2 large-ell branch
    for (int i = 1; i <= 40; ++i) {
        const double Z = gp.Z_wp + (gp.Z_black - 1e-6 - gp.Z_wp) * i / 41.0;
        const auto q = psi({Z, gp.v(Z)}, gp.params);
        CHECK(q.z < 0.0);
        CHECK(in_region(q, Region::D2doubleprime, gp.params, &gp.coeffs));
    }
}

TEST_CASE("J: regular form, overlap, and the compactified tail") {
    const auto& gp = profile22();
    CHECK(std::abs(eval_J(gp, 0.0)) < 1e-14);
    // the two J forms agree at the overlap point Z = 1
    const double v = gp.v(1.0), dv = gp.dv_dZ(1.0);
    const double m = gp.params.m, k = gp.params.k, ell = gp.params.ell;
    const double J3 = (m * v * (1 - v * v) + ell * dv * (1.0 - v)) / ((1.0 - v) * (1 - v * v));
    const double Jdef = ((-m + k * v) * (1 - v * v) + dv * (1.0 - v)) / ((1.0 - v) * (1 - v * v));
    CHECK(J3 == doctest::Approx(Jdef).epsilon(1e-9));
    CHECK(eval_J(gp, 1.0) == doctest::Approx(J3).epsilon(1e-9));

    // large Z: J(1/W) + m W ~ W^2 Jtilde with bounded Jtilde
    for (double W : {0.05, 0.02, 0.005}) {
        const double J = eval_J(gp, 1.0 / W);
        const double Jt = eval_Jtilde(gp, W);
        CHECK(std::abs(J + m * W - W * W * Jt) < 1e-12);
        CHECK(std::abs(Jt) < 10.0);
    }
}

TEST_CASE("density: normalization, positivity, tail consistency") {
    const auto& gp = profile22();
    CHECK(gp.rho_hat(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gp.rho_star > 0.0);
    CHECK(std::isfinite(gp.rho_star));
    for (int i = 0; i <= 200; ++i) {
        const double Z = 2000.0 * i / 200.0;
        CHECK(gp.rho_hat(Z) > 0.0);
    }
    // rho_hat(Z) Z^beta -> rho_star within 1% at Z = 1e3 (via the W branch)
    const double lhs = gp.rho_hat(1e3) * std::pow(1e3, gp.params.beta);
    CHECK(std::abs(lhs / gp.rho_star - 1.0) < 0.01);
    // two-route mismatch at the handoff
    CHECK(gp.density_seam < 1e-7);
}

TEST_CASE("profile_at: pointwise identities") {
    const auto& gp = profile22();
    const auto p0 = profile_at(gp, 0.0);
    CHECK(p0.v == 0.0);
    CHECK(p0.rho_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p0.u0_hat == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p0.u_hat == 0.0);

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double Z = 20.0 * ud(rng);
        const auto pt = profile_at(gp, Z);
        CHECK(pt.u0_hat < 0.0);
        CHECK(std::abs(pt.u0_hat * pt.u0_hat - pt.u_hat * pt.u_hat - 1.0) < 1e-12);
    }
    // limits
    const auto pinf = profile_at(gp, 5e3);
    CHECK(pinf.u0_hat ==
          doctest::Approx(-1.0 / std::sqrt(1.0 - gp.v_inf * gp.v_inf)).epsilon(1e-5));
    CHECK(pinf.u_hat ==
          doctest::Approx(gp.v_inf / std::sqrt(1.0 - gp.v_inf * gp.v_inf)).epsilon(1e-4));
}

TEST_CASE("v-asymptote matches the W-field slope at W -> 0") {
    const auto& gp = profile22();
    const double Z = 1e3;
    const double lhs = Z * Z * gp.dv_dZ(Z);
    const double G0 = make_rhs_W(gp.params)(0.0, gp.v_inf);
    CHECK(std::abs(lhs + G0) < 0.01 * std::abs(G0));
}

TEST_CASE("even extension near Z = 0") {
    const auto rep = even_extension_check(profile22());
    for (int i = 0; i < 4; ++i) CHECK(rep.max_odd_coeff[i] < 1e-8);
    CHECK(rep.ok);
}

TEST_CASE("PDE residual on a coarse grid") {
    const double res = max_pde_residual(profile22(), 10, 10, 1e-4);
    CHECK(res < 1e-6);
}

TEST_CASE("glued profile satisfies the ODE on every piece") {
    const auto& gp = profile22();
    double worst = 0.0;
    for (int i = 1; i <= 3000; ++i) {
        const double Z = 12.0 * i / 3000.0;
        const double v = gp.v(Z), dv = gp.dv_dZ(Z);
        const auto [Dv, DZ] = field_Zv({Z, v}, gp.params);
        worst = std::max(worst, std::abs(DZ * dv - Dv) /
                                    (std::abs(DZ * dv) + std::abs(Dv) + 1e-300));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("compactified tail agrees with direct far-field integration") {
    const auto& gp = profile22();
    OdeControl c;
    c.rtol = c.atol = 1e-12;
    const auto far = integrate(make_rhs_Zv(gp.params), gp.Z_wp, gp.v(gp.Z_wp), 2000.0, c);
    CHECK(std::abs(far.y_back() - gp.v(2000.0)) < 1e-9);
}

TEST_CASE("region error on a wrong R0") {
    // far from the matched value the post-sonic point escapes the barrier
    CHECK_THROWS_AS(build_global_v(2, 2.0, 3.45, {}), error);
}

TEST_CASE("K1 branch uses the cubic barrier region (k=1, ell=3)") {
    MatchResult mr;
    const auto gp = solve_profile(1, 3.0, {}, {}, false, &mr);
    CHECK(admissible(1, 3.0).in_K1);
    for (int i = 1; i <= 30; ++i) {
        const double Z = gp.Z_wp + (gp.Z_black - 1e-6 - gp.Z_wp) * i / 31.0;
        const auto q = psi({Z, gp.v(Z)}, gp.params);
        CHECK(in_region(q, Region::D2prime, gp.params, &gp.coeffs));
    }
    const auto lm = landmarks(gp.params);
    CHECK(std::abs(gp.v(lm.Z1) - lm.v1) < 1e-8);
    CHECK(gp.Z_black > lm.Z1);
    CHECK(gp.Z_black < 1.0);
}
