#pragma once

#include "implode/errors.hpp"
#include "implode/params.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace implode {

using Rhs = std::function<double(double, double)>;

struct OdeControl {
    double rtol = 1e-11;
    double atol = 1e-11;
    double max_step_frac = 0.02;  // max step = frac * |span|
    double h0 = 0.0;              // 0 -> heuristic
    bool throw_on_step_failure = true;
};

struct EventSpec {
    std::string name;
    std::function<double(double, double)> g;  // smooth; sign change marks the event
    bool terminal = true;
};

struct EventHit {
    std::string name;
    double x = 0, y = 0;
};

// One accepted step with the data needed for dense output.
struct DenseStep {
    double x0 = 0, h = 0;
    std::array<double, 5> rcont{};  // contd5-style interpolation coefficients
    double eval(double x) const;
    double eval_deriv(double x) const;
};

struct Trajectory {
    enum class Termination { reached_end, event, step_failure };
    std::vector<double> xs, ys;
    std::vector<DenseStep> steps;
    Termination termination = Termination::reached_end;
    EventHit stop_event;           // valid when termination == event
    std::vector<EventHit> passed;  // non-terminal events, in crossing order

    double x_front() const { return xs.front(); }
    double x_back() const { return xs.back(); }
    double y_back() const { return ys.back(); }
    double eval(double x) const;
    double eval_deriv(double x) const;
};

// Adaptive Dormand-Prince 5(4) with dense output and event location by
// bisection on the dense interpolant.
Trajectory integrate(const Rhs& f, double x0, double y0, double x_end, const OdeControl& ctrl = {},
                     std::span<const EventSpec> events = {});

// Right-hand sides of the three profile ODEs.
Rhs make_rhs_Zv(const ParamSet& ps);
Rhs make_rhs_zu(const ParamSet& ps);
Rhs make_rhs_W(const ParamSet& ps);

// Event function Psi_z(Z, v) - zeta for the matching abscissa.
std::function<double(double, double)> event_psi_z_equals(double zeta, const ParamSet& ps);
// Delta_v(Z, v): vanishes on the black curve.
std::function<double(double, double)> event_delta_v_zero(const ParamSet& ps);
// v - Z_b^{-1}-style test: Z - Z_b(v), also vanishing on the black curve.
std::function<double(double, double)> event_Z_minus_Zb(const ParamSet& ps);

}  // namespace implode
