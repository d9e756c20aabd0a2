#include "implode/fields.hpp"

#include "implode/params.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace implode;

namespace {
ParamSet params_from_m(int k, double ell, double m) {
    return derive_params(k, ell, k / m - 1.0);
}
}  // namespace

TEST_CASE("field_Zv: zeros at P1 and P2, signs in R1") {
    const auto p = params_from_m(3, 2.0, 1.0);
    const auto lm = landmarks(p);
    CHECK(lm.Z1 == doctest::Approx(3.0 * std::sqrt(2.0) / 5.0).epsilon(1e-14));
    CHECK(lm.v1 == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));

    const auto [Dv1, DZ1] = field_Zv({lm.Z1, lm.v1}, p);
    CHECK(std::abs(Dv1) < 1e-14);
    CHECK(std::abs(DZ1) < 1e-14);

    const auto [Dv2, DZ2] = field_Zv({1.0, 1.0}, p);
    CHECK(Dv2 == 0.0);
    CHECK(DZ2 == 0.0);

    const auto [Dv3, DZ3] = field_Zv({0.2, 0.05}, p);
    // direct substitution
    const double want_Dv = (1 - 0.05 * 0.05) * (1.0 * (1 - 0.05 * 0.05) * 0.2 -
                                                3.0 * 0.05 * (1 - 0.05 * 0.2));
    const double want_DZ =
        0.2 * ((1 - 0.2 * 0.05) * (1 - 0.2 * 0.05) - 2.0 * (0.05 - 0.2) * (0.05 - 0.2));
    CHECK(Dv3 == doctest::Approx(want_Dv).epsilon(1e-14));
    CHECK(DZ3 == doctest::Approx(want_DZ).epsilon(1e-14));
    CHECK(Dv3 > 0.0);
    CHECK(DZ3 > 0.0);
}

TEST_CASE("field_zu: Q1 is a double zero; hand-checked point") {
    const auto p = derive_params(2, 2.0, 2.0);
    const auto [Du0, Dz0] = field_zu({0.0, p.eps}, p);
    CHECK(std::abs(Du0) < 1e-13);
    CHECK(std::abs(Dz0) < 1e-13);

    const auto [Du1, Dz1] = field_zu({0.0, 0.0}, p);
    CHECK(Du1 == 0.0);
    CHECK(Dz1 == doctest::Approx(p.eps).epsilon(1e-14));

    // (z=-0.1, u=5): f(-0.1) = -6.17; Du = -13.9; Dz = 0.287
    const auto [Du2, Dz2] = field_zu({-0.1, 5.0}, p);
    CHECK(f_of_z(-0.1, p) == doctest::Approx(-6.17).epsilon(1e-13));
    CHECK(Du2 == doctest::Approx(-13.9).epsilon(1e-12));
    CHECK(Dz2 == doctest::Approx(0.287).epsilon(1e-12));
}

TEST_CASE("curve_eval: anchors, domains, landmark relations") {
    const auto p = derive_params(2, 2.0, 2.0);
    CHECK(curve_eval(Curve::u_p, 0.0, p) == doctest::Approx(p.eps));
    CHECK(curve_eval(Curve::u_b, 0.0, p) == doctest::Approx(p.eps));
    CHECK(curve_eval(Curve::u_g, 0.0, p) == doctest::Approx(p.eps));
    const auto lm = landmarks(p);
    CHECK(curve_eval(Curve::u_g, lm.zg, p) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(lm.zg_minus < -p.gamma);
    CHECK(-p.gamma < lm.zg);
    CHECK(lm.zg < 0.0);

    // v1 curve passes через P1 for (m=1, ell=2, k=3)
    const auto q = params_from_m(3, 2.0, 1.0);
    const auto lmq = landmarks(q);
    CHECK(curve_eval(Curve::v1, lmq.Z1, q) == doctest::Approx(lmq.v1).epsilon(1e-13));
    // and P1 lies on v_minus
    CHECK(curve_eval(Curve::v_minus, lmq.Z1, q) == doctest::Approx(lmq.v1).epsilon(1e-13));
    // Z_b(v1) = Z1
    CHECK(curve_eval(Curve::Z_b, lmq.v1, q) == doctest::Approx(lmq.Z1).epsilon(1e-13));

    CHECK_THROWS_AS(curve_eval(Curve::v1, lmq.Ze * 1.01, q), domain_error);
    CHECK_THROWS_AS(curve_eval(Curve::u_b, 1.0 / (q.k + 1.0), q), domain_error);
    CHECK(curve_eval(Curve::v1, 0.0, q) == 0.0);
}

TEST_CASE("L_apply: closed-form identities") {
    const auto p = derive_params(2, 2.0, 2.0);
    const auto s = sonic_data(p);
    const auto c = b_constants(p, s);

    // L(u_g)(z) = 2 k l (1-l) z (gamma+z)^3; at z=-0.5 the value is 13.5
    const double ug[] = {p.eps, 2.0 * (1.0 + p.ell * p.gamma), p.ell - 1.0};
    CHECK(L_apply(ug, -0.5, p) == doctest::Approx(13.5).epsilon(1e-13));

    // L(u_(1))(z) = -(R-2) delta a2 z^2 - (l-1) a1 z^3 at z=0.1 -> -1.974
    const double u1[] = {p.eps, s.a1};
    CHECK(L_apply(u1, 0.1, p) == doctest::Approx(-1.974).epsilon(1e-12));

    // randomized: L(u_g) identity across parameters
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const int k = 1 + int(ud(rng) * 5.99);
        const double ell = 1.05 + 4.0 * ud(rng);
        const double g = (1.0 / std::sqrt(ell)) * (1.01 + 2.0 * ud(rng));
        const auto pp = derive_params(k, ell, g);
        const double z = -1.0 + 2.0 * ud(rng);
        const double ugz[] = {pp.eps, 2.0 * (1.0 + ell * g), ell - 1.0};
        const double want = 2.0 * k * ell * (1.0 - ell) * z * std::pow(g + z, 3);
        CHECK(L_apply(ugz, z, pp) ==
              doctest::Approx(want).epsilon(1e-11).scale(1.0 + std::abs(want)));
    }
    (void)c;
}

TEST_CASE("barrier polynomials") {
    const auto p = derive_params(2, 2.0, 2.0);
    const auto s = sonic_data(p);
    const auto c = b_constants(p, s);

    const auto u1 = barrier_poly(Barrier::u1, p, s, c);
    REQUIRE(u1.coeffs.size() == 2);
    CHECK(u1.coeffs[0] == doctest::Approx(7.0));
    CHECK(u1.coeffs[1] == doctest::Approx(14.0));

    const auto U3 = barrier_poly(Barrier::U3, p, s, c);
    const double M = (1036.0 / 9.0) * (1036.0 / 9.0) / (4.0 * 49.0 / 3.0);
    CHECK(U3.coeffs[4] == doctest::Approx(M).epsilon(1e-13));

    // U3* is C1 at the breakpoint 2 xi2, where it matches u_(1)
    const auto U3s = barrier_poly(Barrier::U3star, p, s, c);
    const double bp = U3s.breakpoint;
    CHECK(barrier_eval(U3s, bp) ==
          doctest::Approx(poly_eval(U3s.left_coeffs, bp)).epsilon(1e-12));
    CHECK(poly_eval_deriv(U3s.coeffs, bp) ==
          doctest::Approx(poly_eval_deriv(U3s.left_coeffs, bp)).epsilon(1e-10));
    // U3(2 xi2) = u_(1)(2 xi2), from U3 = u_(1) + M z^2 (z - 2 xi2)^2
    CHECK(poly_eval(U3.coeffs, bp) ==
          doctest::Approx(poly_eval(u1.coeffs, bp)).epsilon(1e-12));
}

TEST_CASE("f and L(u_(3)) signs on [-eps/a1, 0]") {
    for (auto [k, ell] : {std::pair<int, double>{2, 1.5}, {3, 1.2}, {1, 3.0}}) {
        for (double R : {3.1, 3.5, 3.9}) {
            const auto p = derive_params(k, ell, gamma_from_R(k, ell, R));
            const auto s = sonic_data(p);
            const auto c = b_constants(p, s);
            const double u3[] = {p.eps, c.a1, c.a2, c.a3};
            for (int i = 0; i <= 20; ++i) {
                const double z = c.xi1 * (1.0 - i / 21.0);
                CHECK(L_apply(u3, z, p) < 0.0);
            }
            for (int i = 0; i <= 20; ++i) {
                const double z = c.xi1 * i / 20.0;
                CHECK(f_of_z(z, p) < 0.0);
            }
        }
    }
}
