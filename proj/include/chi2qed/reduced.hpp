#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "chi2qed/cavity.hpp"
#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"

namespace chi2qed {

/// Two-level abstraction shared by both schemes. State |1> holds the photon
/// in mode a; state |2> is its conversion target (two photons in mode b, or
/// one photon in mode b for the seeded scheme).
///
///   g      = sqrt(2) Omega (TwoMode) or |alpha| Omega (ThreeMode)
///   gamma1 = 1/tau_a
///   gamma2 = 2/tau_b (TwoMode, |2> = |0,2>) or 1/tau_b (ThreeMode)
///
/// tau_eff follows the per-scheme convention used by the platform estimates:
/// (1/(2 tau_a) + 1/tau_b)^-1 for TwoMode — which equals the envelope 1/e
/// time 2/(gamma1+gamma2) — and (1/tau_a + 1/tau_b)^-1 for ThreeMode.
struct ReducedModel {
    Scheme scheme = Scheme::TwoMode;
    double g = 0.0;        // rad/s
    double gamma1 = 0.0;   // rad/s
    double gamma2 = 0.0;   // rad/s
    double detuning = 0.0; // rad/s

    static ReducedModel from_system(const CoupledSystem& system)
    {
        ReducedModel m;
        m.scheme = system.scheme();
        m.detuning = system.detuning();
        const double tau_a = system.mode_a().lifetime();
        const double tau_b = system.mode_b().lifetime();
        m.gamma1 = 1.0 / tau_a;
        if (system.scheme() == Scheme::TwoMode) {
            m.g = std::sqrt(2.0) * system.omega_coupling();
            m.gamma2 = 2.0 / tau_b;
        } else {
            m.g = system.seed_amplitude() * system.omega_coupling();
            m.gamma2 = 1.0 / tau_b;
        }
        return m;
    }

    void validate() const
    {
        detail::require(g >= 0.0 && gamma1 >= 0.0 && gamma2 >= 0.0,
                        "ReducedModel: g and decay rates must be non-negative");
    }

    double tau_eff() const
    {
        detail::require(gamma1 + gamma2 > 0.0, "ReducedModel: tau_eff undefined without loss");
        const double envelope = 2.0 / (gamma1 + gamma2);
        return scheme == Scheme::ThreeMode ? 0.5 * envelope : envelope;
    }

    /// tau_R/2 = 2 pi / (2 g): one full population-oscillation period.
    double half_rabi_period() const
    {
        detail::require(g > 0.0, "ReducedModel: half Rabi period undefined for g = 0");
        return constants::pi / g;
    }
};

/// Eigenvalues of the closed (rho11, rho22, V) decay matrix:
///   lambda0   = -(gamma1+gamma2)/2
///   lambda+/- = -(gamma1+gamma2)/2 +/- sqrt(((gamma1-gamma2)/2)^2 - (2g)^2)
/// Returned in the order {lambda0, lambda+, lambda-}; the pair is complex
/// when 2g exceeds |gamma1-gamma2|/2.
inline std::array<std::complex<double>, 3> decay_eigenvalues(const ReducedModel& model)
{
    model.validate();
    const double s = 0.5 * (model.gamma1 + model.gamma2);
    const double asym = 0.5 * (model.gamma1 - model.gamma2);
    const double disc = asym * asym - 4.0 * model.g * model.g;
    std::complex<double> root =
        disc >= 0.0 ? std::complex<double>(std::sqrt(disc), 0.0)
                    : std::complex<double>(0.0, std::sqrt(-disc));
    return {std::complex<double>(-s, 0.0), -s + root, -s - root};
}

/// Angular frequency 2 Omega_R of the damped population oscillation, or
/// nullopt when the dynamics is at or past critical damping
/// (2g <= |gamma1-gamma2|/2).
inline std::optional<double> damped_rabi_frequency(const ReducedModel& model)
{
    model.validate();
    const double asym = std::abs(0.5 * (model.gamma1 - model.gamma2));
    const double two_g = 2.0 * model.g;
    if (two_g <= asym)
        return std::nullopt;
    return std::sqrt(two_g * two_g - asym * asym);
}

struct CriterionResult {
    bool pass = false;
    double margin = 0.0; // >= 1 passes
};

/// Time-domain strong-coupling criterion: the oscillation must revive before
/// the decay 1/e time, tau_eff >= tau_R/2. Margin is the ratio of the two.
inline CriterionResult strong_coupling_time_criterion(const ReducedModel& model)
{
    detail::require(model.g > 0.0, "time criterion undefined for g = 0");
    const double margin = model.tau_eff() / model.half_rabi_period();
    return {margin >= 1.0, margin};
}

/// Spectral criterion (Rayleigh resolvability of the dressed-state
/// splitting): pi tau_eff >= tau_R/2. Weaker than the time criterion by pi.
inline CriterionResult strong_coupling_spectral_criterion(const ReducedModel& model)
{
    detail::require(model.g > 0.0, "spectral criterion undefined for g = 0");
    const double margin = constants::pi * model.tau_eff() / model.half_rabi_period();
    return {margin >= 1.0, margin};
}

} // namespace chi2qed
