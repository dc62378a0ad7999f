#pragma once

#include <cmath>
#include <cstdint>

#include "chi2qed/errors.hpp"

namespace chi2qed {

/// Classical fixed-step 4th-order Runge-Kutta step. State must support
/// addition and scaling by double (Eigen vectors/matrices do).
template <class State, class Deriv>
State rk4_step(const State& y, double t, double dt, Deriv&& f)
{
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k1));
    const State k3 = f(t + 0.5 * dt, State(y + (0.5 * dt) * k2));
    const State k4 = f(t + dt, State(y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline constexpr std::int64_t max_integration_steps = 100'000'000;

/// Number of fixed steps covering [0, t_final] with step <= dt.
inline std::int64_t step_count(double t_final, double dt)
{
    detail::require(t_final > 0.0 && dt > 0.0, "step_count: t_final and dt must be positive");
    const double n = std::ceil(t_final / dt - 1e-9);
    if (n > static_cast<double>(max_integration_steps))
        throw ResourceError("integration would need more than 1e8 steps; increase dt_max");
    return static_cast<std::int64_t>(n);
}

} // namespace chi2qed
