#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"
#include "chi2qed/integrate.hpp"
#include "chi2qed/reduced.hpp"

namespace chi2qed {

/// Populations and coherence of the closed subsystem.
/// TwoMode basis: |1> = |1,0>, |2> = |0,2>, |3> = |0,1>, |4> = |0,0>.
/// ThreeMode basis: |1> = |1,0>, |2> = |0,1>, |3> = |0,0> (rho44 stays 0).
/// V = rho12 - rho21 is purely imaginary; im_v stores Im V.
struct SubsystemState {
    double rho11 = 0.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
    double rho44 = 0.0;
    double im_v = 0.0;

    double total_population() const { return rho11 + rho22 + rho33 + rho44; }
};

/// The resonant closed subset written as a real linear system on
/// x = (rho11, rho22, Im V):
///   M = [ -gamma1      0      -g  ]
///       [    0      -gamma2    g  ]
///       [   2g        -2g     -s  ],  s = (gamma1+gamma2)/2
/// plus the population feeds underneath:
///   TwoMode:   rho33' = gamma2 rho22 - (gamma2/2) rho33,
///              rho44' = gamma1 rho11 + (gamma2/2) rho33
///   ThreeMode: rho33' = gamma1 rho11 + gamma2 rho22
struct SubsystemGenerator {
    Eigen::Matrix3d matrix;
    Scheme scheme;
    double gamma1;
    double gamma2;
};

inline SubsystemGenerator subsystem_generator(const ReducedModel& model)
{
    model.validate();
    const double s = 0.5 * (model.gamma1 + model.gamma2);
    SubsystemGenerator gen;
    gen.matrix << -model.gamma1, 0.0, -model.g,
                   0.0, -model.gamma2, model.g,
                   2.0 * model.g, -2.0 * model.g, -s;
    gen.scheme = model.scheme;
    gen.gamma1 = model.gamma1;
    gen.gamma2 = model.gamma2;
    return gen;
}

struct TraceMetadata {
    Scheme scheme = Scheme::TwoMode;
    double g = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double detuning = 0.0;
    double dt = 0.0;
    double t_final = 0.0;
    std::int64_t steps = 0;
};

struct SimulationTrace {
    std::vector<double> times;
    std::vector<SubsystemState> states;
    TraceMetadata metadata;
};

namespace detail {

// y = (rho11, rho22, rho33, rho44, u, v) where u = Re(rho12 + rho21) is the
// second coherence quadrature; it only couples in at nonzero detuning.
using SubsystemVec = Eigen::Matrix<double, 6, 1>;

/// Step bound: never longer than a fiftieth of the fastest timescale among
/// decay, coupling and detuning.
inline double subsystem_step(const ReducedModel& model, double t_final, double dt_max)
{
    double tau_min = t_final;
    if (model.gamma1 > 0.0)
        tau_min = std::min(tau_min, 1.0 / model.gamma1);
    if (model.gamma2 > 0.0)
        tau_min = std::min(tau_min, 1.0 / model.gamma2);
    if (model.g > 0.0)
        tau_min = std::min(tau_min, 1.0 / (2.0 * model.g));
    if (model.detuning != 0.0)
        tau_min = std::min(tau_min, 1.0 / std::abs(model.detuning));
    double dt = tau_min / 50.0;
    if (dt_max > 0.0)
        dt = std::min(dt, dt_max);
    return dt;
}

/// Integrate and append samples to `trace` (skipping the t = 0 sample when
/// asked, so segments can be chained). Returns the final state vector.
inline SubsystemVec integrate_subsystem(const ReducedModel& model, SubsystemVec y,
                                        double t_final, double dt_max,
                                        std::int64_t sample_stride, double t_offset,
                                        bool record_start, SimulationTrace& trace)
{
    const double dt_req = subsystem_step(model, t_final, dt_max);
    const std::int64_t n_steps = step_count(t_final, dt_req);
    const double dt = t_final / static_cast<double>(n_steps);

    const double g = model.g;
    const double g1 = model.gamma1;
    const double g2 = model.gamma2;
    const double s = 0.5 * (g1 + g2);
    const double delta = model.detuning;
    const bool two_mode = model.scheme == Scheme::TwoMode;

    auto rhs = [&](double, const SubsystemVec& y_) -> SubsystemVec {
        SubsystemVec d;
        d[0] = -g1 * y_[0] - g * y_[5];
        d[1] = -g2 * y_[1] + g * y_[5];
        if (two_mode) {
            d[2] = g2 * y_[1] - 0.5 * g2 * y_[2];
            d[3] = g1 * y_[0] + 0.5 * g2 * y_[2];
        } else {
            d[2] = g1 * y_[0] + g2 * y_[1];
            d[3] = 0.0;
        }
        d[4] = delta * y_[5] - s * y_[4];
        d[5] = -delta * y_[4] + 2.0 * g * (y_[0] - y_[1]) - s * y_[5];
        return d;
    };

    trace.metadata = TraceMetadata{model.scheme, g, g1, g2, delta, dt,
                                   t_offset + t_final, n_steps};

    auto record = [&](std::int64_t step) {
        trace.times.push_back(t_offset + static_cast<double>(step) * dt);
        trace.states.push_back(SubsystemState{y[0], y[1], y[2], y[3], y[5]});
    };

    if (record_start)
        record(0);
    for (std::int64_t step = 0; step < n_steps; ++step) {
        y = rk4_step(y, static_cast<double>(step) * dt, dt, rhs);
        if ((step + 1) % sample_stride == 0 || step + 1 == n_steps)
            record(step + 1);
    }
    return y;
}

} // namespace detail

/// Default RK4 step for a model over [0, t_final]: a fiftieth of the fastest
/// timescale among decay, coupling and detuning.
inline double suggested_step(const ReducedModel& model, double t_final)
{
    return detail::subsystem_step(model, t_final, 0.0);
}

/// Integrate the closed subsystem with fixed-step classical RK4. Nonzero
/// detuning is handled by carrying the second coherence quadrature
/// U = rho12 + rho21 alongside Im V; at Delta = 0 this reduces exactly to
/// the 3x3 system of subsystem_generator.
inline SimulationTrace evolve_subsystem(const ReducedModel& model,
                                        const SubsystemState& initial, double t_final,
                                        double dt_max = 0.0, std::int64_t sample_stride = 1)
{
    model.validate();
    detail::require(t_final > 0.0, "evolve_subsystem: t_final must be positive");
    detail::require(initial.rho11 >= 0.0 && initial.rho22 >= 0.0 && initial.rho33 >= 0.0 &&
                        initial.rho44 >= 0.0 && initial.total_population() <= 1.0 + 1e-9,
                    "evolve_subsystem: initial populations invalid");
    detail::require(sample_stride >= 1, "evolve_subsystem: sample stride must be >= 1");

    detail::SubsystemVec y;
    y << initial.rho11, initial.rho22, initial.rho33, initial.rho44, 0.0, initial.im_v;

    SimulationTrace trace;
    detail::integrate_subsystem(model, y, t_final, dt_max, sample_stride, 0.0, true, trace);
    return trace;
}

struct PiPulseResult {
    double duration = 0.0;  // s
    double fidelity = 0.0;  // rho22 at the end of the pulse
    SimulationTrace trace;
};

/// Deterministic conversion of a mode-a photon to mode b: drive cavity c with
/// amplitude |alpha| for a quarter Rabi cycle, duration pi / (2 |alpha| Omega),
/// then switch the seed off. Fidelity is rho22 at switch-off; the trace keeps
/// running for hold_fraction * duration with the seed off.
inline PiPulseResult pi_pulse(const CoupledSystem& system, double pulse_amplitude,
                              double dt_max = 0.0, double hold_fraction = 0.25)
{
    detail::require(system.scheme() == Scheme::ThreeMode,
                    "pi_pulse: requires a three-mode system");
    detail::require(pulse_amplitude > 0.0 && system.omega_coupling() > 0.0,
                    "pi_pulse: |alpha| Omega must be positive");

    ReducedModel on = ReducedModel::from_system(system);
    on.g = pulse_amplitude * system.omega_coupling();
    const double duration = constants::pi / (2.0 * on.g);

    detail::SubsystemVec y = detail::SubsystemVec::Zero();
    y[0] = 1.0;

    PiPulseResult result;
    result.duration = duration;
    SimulationTrace& trace = result.trace;

    y = detail::integrate_subsystem(on, y, duration, dt_max, 1, 0.0, true, trace);
    result.fidelity = y[1];

    if (hold_fraction > 0.0) {
        ReducedModel off = on;
        off.g = 0.0;
        detail::integrate_subsystem(off, y, hold_fraction * duration, dt_max, 1, duration,
                                    false, trace);
        trace.metadata.scheme = on.scheme;
        trace.metadata.g = on.g;
    }
    return result;
}

} // namespace chi2qed
