#pragma once

#include <cmath>
#include <optional>

#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"

namespace chi2qed {

/// Coupling scheme: either a photon in mode a converts to two photons in
/// mode b (TwoMode, omega_a ~ 2 omega_b), or to one photon in mode b with
/// the energy balance supplied by a coherent seed in mode c (ThreeMode,
/// omega_a ~ omega_b + omega_c).
enum class Scheme { TwoMode, ThreeMode };

/// Photon lifetime tau = Q / omega = Q lambda / (2 pi c).
/// This is the 1/e time of the photon number, which is the convention the
/// quoted platform confinement times follow.
inline double lifetime_from_q(double quality_factor, double wavelength)
{
    detail::require(quality_factor > 0.0, "lifetime_from_q: quality factor must be positive");
    detail::require(wavelength > 0.0, "lifetime_from_q: wavelength must be positive");
    return quality_factor * wavelength / (constants::two_pi * constants::speed_of_light);
}

/// Mode volume expressed as a multiple of the cubic reduced wavelength,
/// V = factor * (lambda/n)^3.
inline double mode_volume(double wavelength, double refractive_index, double factor)
{
    detail::require(wavelength > 0.0, "mode_volume: wavelength must be positive");
    detail::require(refractive_index > 0.0, "mode_volume: refractive index must be positive");
    detail::require(factor > 0.0, "mode_volume: factor must be positive");
    const double reduced = wavelength / refractive_index;
    return factor * reduced * reduced * reduced;
}

/// 1/e time of the decaying population oscillation.
/// TwoMode:   1/tau_eff = 1/(2 tau_a) + 1/tau_b
/// ThreeMode: 1/tau_eff = 1/tau_a + 1/tau_b
inline double effective_lifetime(Scheme scheme, double tau_a, double tau_b)
{
    detail::require(tau_a > 0.0, "effective_lifetime: tau_a must be positive");
    detail::require(tau_b > 0.0, "effective_lifetime: tau_b must be positive");
    if (scheme == Scheme::TwoMode)
        return 1.0 / (0.5 / tau_a + 1.0 / tau_b);
    return 1.0 / (1.0 / tau_a + 1.0 / tau_b);
}

/// One optical cavity mode. All quantities SI; immutable after construction.
class CavityMode {
public:
    CavityMode(double wavelength, double quality_factor, double refractive_index,
               double mode_volume)
        : wavelength_(wavelength),
          quality_factor_(quality_factor),
          refractive_index_(refractive_index),
          mode_volume_(mode_volume)
    {
        detail::require(wavelength_ > 0.0, "CavityMode: wavelength must be positive");
        detail::require(quality_factor_ > 0.0, "CavityMode: quality factor must be positive");
        detail::require(refractive_index_ >= 1.0, "CavityMode: refractive index must be >= 1");
        detail::require(mode_volume_ > 0.0, "CavityMode: mode volume must be positive");
    }

    double wavelength() const { return wavelength_; }
    double quality_factor() const { return quality_factor_; }
    double refractive_index() const { return refractive_index_; }
    double mode_volume() const { return mode_volume_; }

    /// omega = 2 pi c / lambda
    double angular_frequency() const
    {
        return constants::two_pi * constants::speed_of_light / wavelength_;
    }

    /// tau = Q / omega, so omega * tau == Q holds exactly.
    double lifetime() const { return quality_factor_ / angular_frequency(); }

private:
    double wavelength_;
    double quality_factor_;
    double refractive_index_;
    double mode_volume_;
};

/// A two- or three-mode coupled configuration. The detuning is always
/// recomputed from the stored modes; a stored value that disagrees by more
/// than 1 part in 1e12 is rejected.
class CoupledSystem {
public:
    static CoupledSystem two_mode(CavityMode mode_a, CavityMode mode_b,
                                  double omega_coupling)
    {
        const double delta = mode_a.angular_frequency() - 2.0 * mode_b.angular_frequency();
        return CoupledSystem(Scheme::TwoMode, mode_a, mode_b, std::nullopt,
                             omega_coupling, 0.0, delta);
    }

    static CoupledSystem three_mode(CavityMode mode_a, CavityMode mode_b, CavityMode mode_c,
                                    double omega_coupling, double seed_amplitude)
    {
        const double delta = mode_a.angular_frequency() - mode_b.angular_frequency() -
                             mode_c.angular_frequency();
        return CoupledSystem(Scheme::ThreeMode, mode_a, mode_b, mode_c,
                             omega_coupling, seed_amplitude, delta);
    }

    Scheme scheme() const { return scheme_; }
    const CavityMode& mode_a() const { return mode_a_; }
    const CavityMode& mode_b() const { return mode_b_; }
    const CavityMode& mode_c() const
    {
        detail::require(mode_c_.has_value(), "CoupledSystem: no mode c in a two-mode system");
        return *mode_c_;
    }

    /// Bare coupling constant Omega >= 0 (rad/s). Mode-profile phases are
    /// absorbed into the overlap integral, so the sign carries no physics.
    double omega_coupling() const { return omega_coupling_; }

    /// |alpha|, the coherent seed amplitude in mode c (ThreeMode only).
    double seed_amplitude() const { return seed_amplitude_; }

    /// omega_a - 2 omega_b (TwoMode) or omega_a - omega_b - omega_c (ThreeMode).
    double detuning() const { return detuning_; }

    double recomputed_detuning() const
    {
        if (scheme_ == Scheme::TwoMode)
            return mode_a_.angular_frequency() - 2.0 * mode_b_.angular_frequency();
        return mode_a_.angular_frequency() - mode_b_.angular_frequency() -
               mode_c_->angular_frequency();
    }

private:
    CoupledSystem(Scheme scheme, CavityMode mode_a, CavityMode mode_b,
                  std::optional<CavityMode> mode_c, double omega_coupling,
                  double seed_amplitude, double detuning)
        : scheme_(scheme),
          mode_a_(mode_a),
          mode_b_(mode_b),
          mode_c_(mode_c),
          omega_coupling_(omega_coupling),
          seed_amplitude_(seed_amplitude),
          detuning_(detuning)
    {
        detail::require(omega_coupling_ >= 0.0,
                        "CoupledSystem: coupling constant must be non-negative");
        detail::require(seed_amplitude_ >= 0.0,
                        "CoupledSystem: seed amplitude must be non-negative");
        const double tol = 1e-12 * mode_a_.angular_frequency();
        detail::require(std::abs(detuning_ - recomputed_detuning()) <= tol,
                        "CoupledSystem: stored detuning inconsistent with modes");
    }

    Scheme scheme_;
    CavityMode mode_a_;
    CavityMode mode_b_;
    std::optional<CavityMode> mode_c_;
    double omega_coupling_;
    double seed_amplitude_;
    double detuning_;
};

} // namespace chi2qed
