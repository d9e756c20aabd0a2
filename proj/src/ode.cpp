#include "implode/ode.hpp"

#include "implode/fields.hpp"
#include "implode/renorm.hpp"

#include <algorithm>
#include <cmath>

namespace implode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

double DenseStep::eval(double x) const {
    const double th = (x - x0) / h;
    const double th1 = 1.0 - th;
    return rcont[0] + th * (rcont[1] + th1 * (rcont[2] + th * (rcont[3] + th1 * rcont[4])));
}

double DenseStep::eval_deriv(double x) const {
    const double th = (x - x0) / h;
    const double dp = rcont[1] + (1.0 - 2.0 * th) * rcont[2] +
                      (2.0 * th - 3.0 * th * th) * rcont[3] +
                      (2.0 * th - 6.0 * th * th + 4.0 * th * th * th) * rcont[4];
    return dp / h;
}

namespace {

const DenseStep& locate_step(const std::vector<DenseStep>& steps, double x) {
    if (steps.empty()) throw numerical_error("trajectory: empty dense output");
    const bool fwd = steps.front().h > 0;
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double x1 = steps[mid].x0 + steps[mid].h;
        if (fwd ? (x <= x1) : (x >= x1))
            hi = mid;
        else
            lo = mid + 1;
    }
    return steps[lo];
}

}  // namespace

double Trajectory::eval(double x) const { return locate_step(steps, x).eval(x); }
double Trajectory::eval_deriv(double x) const { return locate_step(steps, x).eval_deriv(x); }

Trajectory integrate(const Rhs& f, double x0, double y0, double x_end, const OdeControl& ctrl,
                     std::span<const EventSpec> events) {
    Trajectory traj;
    traj.xs.push_back(x0);
    traj.ys.push_back(y0);

    const double span = x_end - x0;
    if (span == 0.0) return traj;
    const double dir = span > 0 ? 1.0 : -1.0;
    const double hmax = std::abs(span) * ctrl.max_step_frac;
    const double hmin = 1e-15 * std::abs(span);

    double x = x0, y = y0;
    double k1 = f(x, y);
    double h = ctrl.h0 != 0.0 ? std::abs(ctrl.h0) : std::abs(span) * 1e-4;
    h = std::min(h, hmax);

    std::vector<double> gprev(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) gprev[i] = events[i].g(x, y);

    const int max_steps = 2000000;
    for (int steps_taken = 0; steps_taken < max_steps; ++steps_taken) {
        if ((x - x_end) * dir >= 0.0) {
            traj.termination = Trajectory::Termination::reached_end;
            return traj;
        }
        if (std::abs(x_end - x) < h) h = std::abs(x_end - x);
        const double hs = h * dir;

        const double k2 = f(x + c2 * hs, y + hs * a21 * k1);
        const double k3 = f(x + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
        const double k4 = f(x + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = f(x + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 =
            f(x + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double y1 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = f(x + hs, y1);  // FSAL

        const double err_raw =
            hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = ctrl.atol + ctrl.rtol * std::max(std::abs(y), std::abs(y1));
        const double err = std::abs(err_raw) / scale;

        if (!std::isfinite(err) || err > 1.0) {
            if (!std::isfinite(err))
                h *= 0.2;
            else
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < hmin) {
                if (ctrl.throw_on_step_failure)
                    throw step_failure("integrate: step size underflow at x=" +
                                       std::to_string(x));
                traj.termination = Trajectory::Termination::step_failure;
                return traj;
            }
            continue;
        }

        // Accept the step; build the dense interpolant.
        DenseStep ds;
        ds.x0 = x;
        ds.h = hs;
        const double ydiff = y1 - y;
        ds.rcont[0] = y;
        ds.rcont[1] = ydiff;
        ds.rcont[2] = hs * k1 - ydiff;
        ds.rcont[3] = ydiff - hs * k7 - ds.rcont[2];
        ds.rcont[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        traj.steps.push_back(ds);

        // Event detection on [x, x+hs] using the dense output.
        struct Hit {
            std::size_t idx;
            double xe, ye;
        };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const double g1 = events[i].g(x + hs, y1);
            if (gprev[i] * g1 < 0.0) {
                double xa = x, xb = x + hs, ga = gprev[i];
                for (int it = 0; it < 200; ++it) {
                    const double xm = 0.5 * (xa + xb);
                    const double gm = events[i].g(xm, ds.eval(xm));
                    if (std::abs(gm) < 1e-13 || std::abs(xb - xa) < 1e-16 * std::abs(hs)) {
                        xa = xb = xm;
                        break;
                    }
                    if (ga * gm <= 0.0)
                        xb = xm;
                    else {
                        xa = xm;
                        ga = gm;
                    }
                }
                const double xe = 0.5 * (xa + xb);
                hits.push_back({i, xe, ds.eval(xe)});
            }
            gprev[i] = g1;
        }
        std::sort(hits.begin(), hits.end(),
                  [&](const Hit& a, const Hit& b) { return (a.xe - b.xe) * dir < 0.0; });
        for (const auto& hit : hits) {
            if (events[hit.idx].terminal) {
                traj.stop_event = {events[hit.idx].name, hit.xe, hit.ye};
                traj.termination = Trajectory::Termination::event;
                // truncate the last dense step at the event for clean eval()
                traj.xs.push_back(hit.xe);
                traj.ys.push_back(hit.ye);
                return traj;
            }
            traj.passed.push_back({events[hit.idx].name, hit.xe, hit.ye});
        }

        x += hs;
        y = y1;
        k1 = k7;
        traj.xs.push_back(x);
        traj.ys.push_back(y);
        h = std::min(hmax, h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2))));
    }
    throw numerical_error("integrate: step budget exhausted");
}

Rhs make_rhs_Zv(const ParamSet& ps) {
    return [ps](double Z, double v) {
        const auto [Dv, DZ] = field_Zv({Z, v}, ps);
        return Dv / DZ;
    };
}

Rhs make_rhs_zu(const ParamSet& ps) {
    return [ps](double z, double u) {
        const auto [Du, Dz] = field_zu({z, u}, ps);
        return Du / Dz;
    };
}

Rhs make_rhs_W(const ParamSet& ps) {
    return [ps](double W, double vt) {
        const double num =
            (1.0 - vt * vt) * (ps.m * (1.0 - vt * vt) - ps.k * vt * (W - vt));
        const double den = ps.ell * (W * vt - 1.0) * (W * vt - 1.0) - (W - vt) * (W - vt);
        return num / den;
    };
}

std::function<double(double, double)> event_psi_z_equals(double zeta, const ParamSet& ps) {
    return [zeta, ps](double Z, double v) {
        const double g = ps.gamma;
        return ((1.0 + g * v * v) * Z - (1.0 + g) * v) / (Z * (1.0 - v * v)) - zeta;
    };
}

std::function<double(double, double)> event_delta_v_zero(const ParamSet& ps) {
    return [ps](double Z, double v) { return field_Zv({Z, v}, ps).first; };
}

std::function<double(double, double)> event_Z_minus_Zb(const ParamSet& ps) {
    return [ps](double Z, double v) { return Z - curve_eval(Curve::Z_b, v, ps); };
}

}  // namespace implode
