#pragma once

#include <cmath>
#include <complex>

#include "chi2qed/cavity.hpp"
#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"
#include "chi2qed/field_grid.hpp"
#include "chi2qed/tensor.hpp"

namespace chi2qed {

/// Midpoint-rule quadrature of
///   integral dV chi_ijk E1_i(r) E2_j(r) E3_k(r)
/// over the common grid of the three fields. Units m^3 * (m/V) for normalized
/// fields. The fields are not conjugated, so travelling waves produce the
/// usual phase-mismatch behaviour; for real standing waves the result is real
/// up to rounding.
inline std::complex<double> overlap_integral(const Chi2Tensor& tensor, const FieldGrid& fa,
                                             const FieldGrid& fb, const FieldGrid& fc)
{
    detail::require(fa.compatible_with(fb) && fa.compatible_with(fc),
                    "overlap_integral: field grids must share origin, spacing and dims");

    std::complex<double> sum = 0.0;
    const auto& va = fa.values();
    const auto& vb = fb.values();
    const auto& vc = fc.values();
    for (std::size_t cell = 0; cell < va.size(); ++cell) {
        const Eigen::Vector3cd& a = va[cell];
        const Eigen::Vector3cd& b = vb[cell];
        const Eigen::Vector3cd& c = vc[cell];
        std::complex<double> local = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    const double chi = tensor(i, j, k);
                    if (chi != 0.0)
                        local += chi * a[i] * b[j] * c[k];
                }
        sum += local;
    }
    return sum * fa.cell_volume();
}

/// The estimate used throughout the platform feasibility numbers:
/// overlap = overlap_fraction * |chi2| * V_a with fraction 1/2 for
/// well-overlapping TE modes grown along (111).
inline double overlap_shortcut(double chi2_magnitude, double mode_volume_a,
                               double fraction = 0.5)
{
    detail::require(chi2_magnitude >= 0.0 && mode_volume_a > 0.0 && fraction > 0.0,
                    "overlap_shortcut: inputs must be positive");
    return fraction * chi2_magnitude * mode_volume_a;
}

namespace detail {

/// Zero-point field scale sqrt(hbar omega / (2 eps0 n^2 V)) in V/m.
inline double zero_point_field(const CavityMode& mode)
{
    const double n2 = mode.refractive_index() * mode.refractive_index();
    return std::sqrt(constants::hbar * mode.angular_frequency() /
                     (2.0 * constants::vacuum_permittivity * n2 * mode.mode_volume()));
}

} // namespace detail

/// Coupling constant from an overlap integral:
///   hbar Omega = eps0 * E_a * E_b^2 * I          (TwoMode, E_b enters twice)
///   hbar Omega = eps0 * E_a * E_b * E_c * I      (ThreeMode)
/// with E_m the zero-point field of mode m. Returns |Omega| in rad/s; the
/// overall phase is a gauge choice absorbed into the mode profiles.
inline double coupling_constant(const CoupledSystem& system, std::complex<double> overlap)
{
    detail::require(std::isfinite(overlap.real()) && std::isfinite(overlap.imag()),
                    "coupling_constant: overlap must be finite");
    const double ea = detail::zero_point_field(system.mode_a());
    const double eb = detail::zero_point_field(system.mode_b());
    double product = ea * eb;
    if (system.scheme() == Scheme::TwoMode)
        product *= eb;
    else
        product *= detail::zero_point_field(system.mode_c());
    return constants::vacuum_permittivity / constants::hbar * product * std::abs(overlap);
}

} // namespace chi2qed
