#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "chi2qed/cavity.hpp"
#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"
#include "chi2qed/reduced.hpp"

namespace chi2qed {

/// Dressed-state branch energies
///   E+/- = (hbar/2)(omega_a + omega_partner) +/- (hbar/2) sqrt((2g)^2 + Delta^2)
/// where omega_partner is 2 omega_b (TwoMode) or omega_b + omega_c
/// (ThreeMode) and Delta = omega_a - omega_partner. Returns {E+, E-} in J.
inline std::pair<double, double> dressed_energies(double omega_a, double omega_partner,
                                                  double g)
{
    detail::require(omega_a > 0.0 && omega_partner > 0.0,
                    "dressed_energies: frequencies must be positive");
    const double delta = omega_a - omega_partner;
    const double mean = 0.5 * (omega_a + omega_partner);
    const double split = 0.5 * std::sqrt(4.0 * g * g + delta * delta);
    return {constants::hbar * (mean + split), constants::hbar * (mean - split)};
}

/// Generalized Rabi frequency Omega' = sqrt((2g)^2 + Delta^2).
inline double generalized_rabi(double g, double delta)
{
    return std::sqrt(4.0 * g * g + delta * delta);
}

/// Effective linewidths of the two dressed branches,
///   Gamma+/- = (Gamma_a/2)(Omega' +/- Delta)/(2 Omega')
///            + Gamma_b (Omega' -/+ Delta)/(2 Omega'),
/// with Gamma_a = 1/tau_a and Gamma_b = 1/tau_b as the energy decay rates.
/// Their sum Gamma_a/2 + Gamma_b is independent of detuning.
inline std::pair<double, double> effective_linewidths(const ReducedModel& model,
                                                      double gamma_a, double gamma_b)
{
    const double omega_prime = generalized_rabi(model.g, model.detuning);
    detail::require(omega_prime > 0.0, "effective_linewidths: Omega' must be positive");
    const double d = model.detuning;
    const double plus = 0.5 * gamma_a * (omega_prime + d) / (2.0 * omega_prime) +
                        gamma_b * (omega_prime - d) / (2.0 * omega_prime);
    const double minus = 0.5 * gamma_a * (omega_prime - d) / (2.0 * omega_prime) +
                         gamma_b * (omega_prime + d) / (2.0 * omega_prime);
    return {plus, minus};
}

struct DressedSpectrum {
    double e_plus = 0.0;       // J
    double e_minus = 0.0;      // J
    double gamma_plus = 0.0;   // rad/s
    double gamma_minus = 0.0;  // rad/s
    double omega_prime = 0.0;  // rad/s
};

/// Assemble the full dressed-state picture of a coupled system.
inline DressedSpectrum dressed_spectrum(const CoupledSystem& system)
{
    const ReducedModel model = ReducedModel::from_system(system);
    const double omega_a = system.mode_a().angular_frequency();
    const double omega_partner =
        system.scheme() == Scheme::TwoMode
            ? 2.0 * system.mode_b().angular_frequency()
            : system.mode_b().angular_frequency() + system.mode_c().angular_frequency();

    DressedSpectrum s;
    std::tie(s.e_plus, s.e_minus) = dressed_energies(omega_a, omega_partner, model.g);
    const double tau_a = system.mode_a().lifetime();
    const double tau_b = system.mode_b().lifetime();
    std::tie(s.gamma_plus, s.gamma_minus) =
        effective_linewidths(model, 1.0 / tau_a, 1.0 / tau_b);
    s.omega_prime = generalized_rabi(model.g, model.detuning);
    return s;
}

struct SpectrumCurve {
    std::vector<double> omega;  // rad/s
    std::vector<double> value;  // dimensionless
};

/// Emission model: sum of two Lorentzian lines centered at E+/-/hbar with
/// FWHM Gamma+/-, each of unit peak height,
///   S(omega) = sum_{+,-} (Gamma/2)^2 / ((omega - E/hbar)^2 + (Gamma/2)^2).
inline SpectrumCurve transmission_spectrum(const DressedSpectrum& spectrum,
                                           const std::vector<double>& omega_samples)
{
    detail::require(spectrum.gamma_plus >= 0.0 && spectrum.gamma_minus >= 0.0,
                    "transmission_spectrum: linewidths must be non-negative");
    SpectrumCurve curve;
    curve.omega = omega_samples;
    curve.value.reserve(omega_samples.size());
    const double w_plus = spectrum.e_plus / constants::hbar;
    const double w_minus = spectrum.e_minus / constants::hbar;
    const double h_plus = 0.5 * spectrum.gamma_plus;
    const double h_minus = 0.5 * spectrum.gamma_minus;
    for (double w : curve.omega) {
        const double dp = w - w_plus;
        const double dm = w - w_minus;
        double s = 0.0;
        if (h_plus > 0.0 || dp != 0.0)
            s += h_plus * h_plus / (dp * dp + h_plus * h_plus);
        if (h_minus > 0.0 || dm != 0.0)
            s += h_minus * h_minus / (dm * dm + h_minus * h_minus);
        curve.value.push_back(s);
    }
    return curve;
}

/// Evenly spaced sample points, endpoints included.
inline std::vector<double> linspace(double lo, double hi, int count)
{
    detail::require(count >= 2, "linspace: need at least two samples");
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i)
        xs[i] = lo + (hi - lo) * i / (count - 1);
    return xs;
}

} // namespace chi2qed
