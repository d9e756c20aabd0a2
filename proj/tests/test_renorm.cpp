#include "implode/renorm.hpp"

#include "implode/fields.hpp"
#include "implode/params.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace implode;

TEST_CASE("psi maps P1 to Q1; theta inverts it") {
    const auto p = derive_params(2, 2.0, 2.0);
    const auto lm = landmarks(p);
    const auto q = psi({lm.Z1, lm.v1}, p);
    CHECK(q.z == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(q.u == doctest::Approx(7.0).epsilon(1e-13));

    const auto back = theta({0.0, 7.0}, p);
    CHECK(back.Z == doctest::Approx(3.0 * std::sqrt(2.0) / 5.0).epsilon(1e-14));
    CHECK(back.v == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));

    CHECK_THROWS_AS(psi({0.5, 1.5}, p), domain_error);
    CHECK_THROWS_AS(theta({1.5, 2.0}, p), domain_error);
}

TEST_CASE("bijection round-trips, 1000 samples each way") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const int k = 1 + int(ud(rng) * 5.99);
        const double ell = 1.05 + 4.0 * ud(rng);
        const double g = (1.0 / std::sqrt(ell)) * (1.02 + 2.0 * ud(rng));
        const auto p = derive_params(k, ell, g);

        const double v = 0.05 + 0.90 * ud(rng);
        const double Z = (0.05 + 0.90 * ud(rng)) / v;
        const auto q = psi({Z, v}, p);
        CHECK(in_region(q, Region::D0, p));
        const auto b = theta(q, p);
        CHECK(std::abs(b.Z - Z) <= 1e-12 * std::max(1.0, Z));
        CHECK(std::abs(b.v - v) <= 1e-12);

        const double z = 1.0 - 2.5 * ud(rng);
        const double u = 0.02 + 20.0 * ud(rng);
        const auto pz = theta({z, u}, p);
        CHECK(in_region(pz, Region::R0, p));
        const auto qq = psi(pz, p);
        CHECK(std::abs(qq.z - z) <= 1e-12 * std::max(1.0, std::abs(z)));
        CHECK(std::abs(qq.u - u) <= 1e-12 * std::max(1.0, u));
    }
}

TEST_CASE("differential identity for Psi_z (finite differences)") {
    // (dPsi_z/dZ) Delta_Z + (dPsi_z/dv) Delta_v = -Delta_z(z,u) / N(z,u)
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const int k = 1 + int(ud(rng) * 3.99);
        const double ell = 1.1 + 2.0 * ud(rng);
        const double g = (1.0 / std::sqrt(ell)) * (1.05 + 1.5 * ud(rng));
        const auto p = derive_params(k, ell, g);
        const double v = 0.1 + 0.75 * ud(rng);
        const double Z = std::max(0.35, (0.1 + 0.8 * ud(rng)) / v);
        if (Z * v >= 0.95) continue;

        const double h = 1e-6;
        auto psi_z = [&](double Zq, double vq) { return psi({Zq, vq}, p).z; };
        const double dz_dZ = (psi_z(Z + h, v) - psi_z(Z - h, v)) / (2 * h);
        const double dz_dv = (psi_z(Z, v + h) - psi_z(Z, v - h)) / (2 * h);
        const auto [Dv, DZ] = field_Zv({Z, v}, p);
        const double lhs = dz_dZ * DZ + dz_dv * Dv;

        const auto q = psi({Z, v}, p);
        const auto [Du, Dz] = field_zu(q, p);
        (void)Du;
        const double rhs = -Dz / n_factor(q, p);
        // 1e-9 relative, except where FD roundoff eps*|Psi_z|/h, amplified by
        // the field magnitudes, provably dominates.
        const double fd_noise =
            2.2e-16 / h * (1.0 + std::abs(q.z)) * (std::abs(DZ) + std::abs(Dv));
        const double tol = std::max(1e-9 * (1.0 + std::abs(rhs)), 10.0 * fd_noise);
        CHECK(std::abs(lhs - rhs) <= tol);
    }
}

TEST_CASE("region classification") {
    const auto p = derive_params(2, 2.0, 2.0);
    const auto lm = landmarks(p);

    // z > 0 above u_g -> D1
    const double z1 = 0.1;
    const auto tag1 = classify(ZuPoint{z1, curve_eval(Curve::u_g, z1, p) + 1.0}, p);
    CHECK(tag1.tag == Region::D1);

    // inside D2
    const double z2 = lm.zg / 2.0;
    const auto tag2 = classify(ZuPoint{z2, curve_eval(Curve::u_g, z2, p) / 2.0}, p);
    CHECK((tag2.tag == Region::D2 || tag2.tag == Region::D2prime ||
           tag2.tag == Region::D2doubleprime));

    // mapped D2 samples land in R2: Delta_v < 0, Delta_Z < 0, v < Z
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double z = lm.zg * (0.05 + 0.9 * ud(rng));
        const double u = curve_eval(Curve::u_g, z, p) * (0.05 + 0.9 * ud(rng));
        if (!(u > 0)) continue;
        const auto pt = theta({z, u}, p);
        const auto [Dv, DZ] = field_Zv(pt, p);
        CHECK(Dv < 0.0);
        CHECK(DZ < 0.0);
        CHECK(pt.v < pt.Z);
        CHECK(in_region(pt, Region::R2, p));
    }

    // D1 samples map to R1 (both fields positive)
    for (int i = 0; i < 100; ++i) {
        const double z = 0.02 + 0.8 / (p.k + 1.0) * ud(rng);
        const double u = curve_eval(Curve::u_g, z, p) + 0.1 + 5.0 * ud(rng);
        const auto pt = theta({z, u}, p);
        const auto [Dv, DZ] = field_Zv(pt, p);
        CHECK(Dv > 0.0);
        CHECK(DZ > 0.0);
    }

    // N(z, u) > 0 on D0
    for (int i = 0; i < 100; ++i) {
        const double z = 1.0 - 3.0 * ud(rng);
        const double u = 0.01 + 30.0 * ud(rng);
        CHECK(n_factor({z, u}, p) > 0.0);
    }

    // a point on the green curve Z = Z_g(v) with v > v1 tags as R2plus
    const double vg = 0.5 * (lm.v1 + 1.0);
    const double Zg = curve_eval(Curve::Z_g, vg, p);
    CHECK(classify(ZvPoint{Zg, vg}, p).tag == Region::R2plus);
}
