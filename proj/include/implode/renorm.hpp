#pragma once

#include "implode/fields.hpp"
#include "implode/params.hpp"

namespace implode {

// Change of variables Psi: (Z,v) -> (z,u) and its inverse Theta. Psi maps
// R0 = {0 < v < 1, 0 < Zv < 1} bijectively onto D0 = {u > 0, z < 1} and
// sends the sonic point P1 to Q1(0, eps).
ZuPoint psi(ZvPoint p, const ParamSet& ps);
ZvPoint theta(ZuPoint q, const ParamSet& ps);

enum class Region {
    R0,
    R1,
    R2,
    R2plus,
    D0,
    D1,
    D2,
    D2prime,
    D2doubleprime,
    outside,
};

struct RegionTag {
    enum class Plane { Zv, zu } plane;
    Region tag;
};

// Membership test for one named region. D2prime / D2doubleprime need the
// coefficient table (they reference u_(3) and U_3^*).
bool in_region(ZvPoint p, Region r, const ParamSet& ps);
bool in_region(ZuPoint q, Region r, const ParamSet& ps, const CoeffTable* c = nullptr);

// Most specific tag for a point (boundary curve R2plus detected to 1e-12).
RegionTag classify(ZvPoint p, const ParamSet& ps);
RegionTag classify(ZuPoint q, const ParamSet& ps, const CoeffTable* c = nullptr);

// N(z,u) = [u + (1-z)^2] [u + (1+gamma)(1-z)] / u, positive on D0.
double n_factor(ZuPoint q, const ParamSet& ps);

}  // namespace implode
