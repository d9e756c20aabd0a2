#include "implode/renorm.hpp"

#include <cmath>

namespace implode {

ZuPoint psi(ZvPoint p, const ParamSet& ps) {
    if (!in_region(p, Region::R0, ps)) throw domain_error("psi: point outside R0");
    const double Z = p.Z, v = p.v, g = ps.gamma;
    const double one_mv2 = 1.0 - v * v;
    const double one_mZv = 1.0 - Z * v;  // evaluated directly, no rearrangement
    ZuPoint q;
    q.z = ((1.0 + g * v * v) * Z - (1.0 + g) * v) / (Z * one_mv2);
    q.u = (1.0 + g) * (1.0 + g) * one_mZv * one_mZv / (Z * Z * one_mv2);
    return q;
}

ZvPoint theta(ZuPoint q, const ParamSet& ps) {
    if (!in_region(q, Region::D0, ps)) throw domain_error("theta: point outside D0");
    const double z = q.z, u = q.u, g = ps.gamma;
    const double w = std::sqrt(u + (1.0 - z) * (1.0 - z));
    ZvPoint p;
    p.Z = (1.0 + g) * w / (u + (1.0 + g) * (1.0 - z));
    p.v = (1.0 - z) / w;
    return p;
}

double n_factor(ZuPoint q, const ParamSet& ps) {
    const double one_mz = 1.0 - q.z;
    return (q.u + one_mz * one_mz) * (q.u + (1.0 + ps.gamma) * one_mz) / q.u;
}

bool in_region(ZvPoint p, Region r, const ParamSet& ps) {
    const auto lm = landmarks(ps);
    switch (r) {
        case Region::R0:
            return p.v > 0 && p.v < 1 && p.Z * p.v > 0 && p.Z * p.v < 1;
        case Region::R1:
            return p.v > 0 && p.v < lm.v1 && p.Z > curve_eval(Curve::Z_b, p.v, ps) &&
                   p.Z < curve_eval(Curve::Z_g, p.v, ps);
        case Region::R2:
            return p.v > lm.v1 && p.v < 1 && p.Z > curve_eval(Curve::Z_g, p.v, ps) &&
                   p.Z < curve_eval(Curve::Z_b, p.v, ps);
        case Region::R2plus:
            return p.v > lm.v1 && p.v < 1 &&
                   std::abs(p.Z - curve_eval(Curve::Z_g, p.v, ps)) <=
                       1e-12 * std::max(1.0, std::abs(p.Z));
        default:
            return false;
    }
}

bool in_region(ZuPoint q, Region r, const ParamSet& ps, const CoeffTable* c) {
    const auto lm = landmarks(ps);
    switch (r) {
        case Region::D0:
            return q.u > 0 && q.z < 1;
        case Region::D1:
            return q.z > 0 && q.z < 1 && q.u > curve_eval(Curve::u_g, q.z, ps);
        case Region::D2:
            return q.z > lm.zg && q.z < 0 && q.u > 0 && q.u < curve_eval(Curve::u_g, q.z, ps);
        case Region::D2prime: {
            if (!c) throw domain_error("in_region: D2prime needs the coefficient table");
            if (!(q.z > lm.zg && q.z < 0 && q.u > 0)) return false;
            const double u3[] = {ps.eps, c->a1, c->a2, c->a3};
            return q.u < poly_eval(u3, q.z);
        }
        case Region::D2doubleprime: {
            if (!c) throw domain_error("in_region: D2doubleprime needs the coefficient table");
            if (!(q.z > lm.zg && q.z < 0 && q.u > 0)) return false;
            const double bp = 2.0 * c->xi2;
            double bound;
            if (q.z <= bp) {
                const double u1[] = {ps.eps, c->a1};
                bound = poly_eval(u1, q.z);
            } else {
                const double U3[] = {ps.eps, c->a1, c->a2, c->a3, c->M};
                bound = poly_eval(U3, q.z);
            }
            return q.u < bound;
        }
        default:
            return false;
    }
}

RegionTag classify(ZvPoint p, const ParamSet& ps) {
    RegionTag t{RegionTag::Plane::Zv, Region::outside};
    if (in_region(p, Region::R2plus, ps))
        t.tag = Region::R2plus;
    else if (in_region(p, Region::R1, ps))
        t.tag = Region::R1;
    else if (in_region(p, Region::R2, ps))
        t.tag = Region::R2;
    else if (in_region(p, Region::R0, ps))
        t.tag = Region::R0;
    return t;
}

RegionTag classify(ZuPoint q, const ParamSet& ps, const CoeffTable* c) {
    RegionTag t{RegionTag::Plane::zu, Region::outside};
    if (in_region(q, Region::D1, ps))
        t.tag = Region::D1;
    else if (in_region(q, Region::D2, ps)) {
        t.tag = Region::D2;
        if (c) {
            if (in_region(q, Region::D2prime, ps, c))
                t.tag = Region::D2prime;
            else if (in_region(q, Region::D2doubleprime, ps, c))
                t.tag = Region::D2doubleprime;
        }
    } else if (in_region(q, Region::D0, ps))
        t.tag = Region::D0;
    return t;
}

}  // namespace implode
