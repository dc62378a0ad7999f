#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"

namespace chi2qed {

/// Discretized complex vector field on a uniform Cartesian grid.
///
/// `origin` is the corner of the sampled box; cell centers sit at
/// origin + (i + 1/2) * spacing, which is what the midpoint quadrature in
/// overlap_integral assumes. Storage is row-major with z fastest:
/// cell(ix, iy, iz) lives at index (ix * ny + iy) * nz + iz.
///
/// Cavity-mode fields are dimensionless and normalized so that the maximum
/// Euclidean norm over cells is 1; makers enforce this, file import checks it.
class FieldGrid {
public:
    FieldGrid(Eigen::Vector3d origin, Eigen::Vector3d spacing, std::array<int, 3> dims)
        : origin_(origin), spacing_(spacing), dims_(dims)
    {
        detail::require(dims_[0] > 0 && dims_[1] > 0 && dims_[2] > 0,
                        "FieldGrid: dims must be positive");
        detail::require(spacing_[0] > 0 && spacing_[1] > 0 && spacing_[2] > 0,
                        "FieldGrid: spacing must be positive");
        values_.assign(cell_count(), Eigen::Vector3cd::Zero());
    }

    const Eigen::Vector3d& origin() const { return origin_; }
    const Eigen::Vector3d& spacing() const { return spacing_; }
    const std::array<int, 3>& dims() const { return dims_; }
    std::size_t cell_count() const
    {
        return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    }
    double cell_volume() const { return spacing_[0] * spacing_[1] * spacing_[2]; }

    Eigen::Vector3cd& cell(int ix, int iy, int iz) { return values_[index(ix, iy, iz)]; }
    const Eigen::Vector3cd& cell(int ix, int iy, int iz) const
    {
        return values_[index(ix, iy, iz)];
    }
    const std::vector<Eigen::Vector3cd>& values() const { return values_; }
    std::vector<Eigen::Vector3cd>& values() { return values_; }

    Eigen::Vector3d cell_center(int ix, int iy, int iz) const
    {
        return origin_ + Eigen::Vector3d((ix + 0.5) * spacing_[0], (iy + 0.5) * spacing_[1],
                                         (iz + 0.5) * spacing_[2]);
    }

    double max_norm() const
    {
        double m = 0.0;
        for (const auto& v : values_)
            m = std::max(m, v.norm());
        return m;
    }

    /// Rescale so the maximum cell norm is exactly 1.
    void normalize()
    {
        const double m = max_norm();
        detail::require(m > 0.0, "FieldGrid::normalize: field is identically zero");
        for (auto& v : values_)
            v /= m;
    }

    bool is_normalized(double tol = 1e-12) const { return std::abs(max_norm() - 1.0) <= tol; }

    /// Evaluate an analytic field at every cell center.
    void fill(const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& f)
    {
        for (int ix = 0; ix < dims_[0]; ++ix)
            for (int iy = 0; iy < dims_[1]; ++iy)
                for (int iz = 0; iz < dims_[2]; ++iz)
                    cell(ix, iy, iz) = f(cell_center(ix, iy, iz));
    }

    bool compatible_with(const FieldGrid& other) const
    {
        if (dims_ != other.dims_)
            return false;
        const double len = (spacing_.cwiseProduct(
                               Eigen::Vector3d(dims_[0], dims_[1], dims_[2]))).norm();
        return (origin_ - other.origin_).norm() <= 1e-12 * std::max(len, 1e-300) &&
               (spacing_ - other.spacing_).norm() <= 1e-12 * spacing_.norm();
    }

private:
    std::size_t index(int ix, int iy, int iz) const
    {
        return (static_cast<std::size_t>(ix) * dims_[1] + iy) * dims_[2] + iz;
    }

    Eigen::Vector3d origin_;
    Eigen::Vector3d spacing_;
    std::array<int, 3> dims_;
    std::vector<Eigen::Vector3cd> values_;
};

// --- analytic field library -------------------------------------------------
//
// Each maker has a closed-form overlap integral, which is what the quadrature
// tests compare against.

/// Spatially constant field with the given (unit) polarization.
inline FieldGrid constant_field(const Eigen::Vector3d& origin, const Eigen::Vector3d& spacing,
                                std::array<int, 3> dims, const Eigen::Vector3d& polarization)
{
    FieldGrid g(origin, spacing, dims);
    const Eigen::Vector3d pol = polarization.normalized();
    g.fill([&](const Eigen::Vector3d&) { return pol.cast<std::complex<double>>(); });
    return g;
}

/// Travelling wave pol * exp(i k . r); |field| = 1 everywhere.
inline FieldGrid plane_wave_field(const Eigen::Vector3d& origin, const Eigen::Vector3d& spacing,
                                  std::array<int, 3> dims, const Eigen::Vector3d& polarization,
                                  const Eigen::Vector3d& wavevector, double phase = 0.0)
{
    FieldGrid g(origin, spacing, dims);
    const Eigen::Vector3d pol = polarization.normalized();
    g.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
        const std::complex<double> amp =
            std::exp(std::complex<double>(0.0, wavevector.dot(r) + phase));
        return pol.cast<std::complex<double>>() * amp;
    });
    return g;
}

/// Real standing wave pol * prod_d sin(k_d (r_d - r0_d)); normalized by the
/// maximum sample so the FieldGrid invariant holds on any grid.
inline FieldGrid standing_wave_field(const Eigen::Vector3d& origin, const Eigen::Vector3d& spacing,
                                     std::array<int, 3> dims, const Eigen::Vector3d& polarization,
                                     const Eigen::Vector3d& wavevector,
                                     const Eigen::Vector3d& node_origin = Eigen::Vector3d::Zero())
{
    FieldGrid g(origin, spacing, dims);
    const Eigen::Vector3d pol = polarization.normalized();
    g.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
        double amp = 1.0;
        for (int d = 0; d < 3; ++d)
            if (wavevector[d] != 0.0)
                amp *= std::sin(wavevector[d] * (r[d] - node_origin[d]));
        return pol.cast<std::complex<double>>() * amp;
    });
    g.normalize();
    return g;
}

/// Gaussian envelope pol * exp(-|r - center|^2 / (2 sigma^2)), normalized by
/// the maximum sample.
inline FieldGrid gaussian_field(const Eigen::Vector3d& origin, const Eigen::Vector3d& spacing,
                                std::array<int, 3> dims, const Eigen::Vector3d& polarization,
                                const Eigen::Vector3d& center, double sigma)
{
    detail::require(sigma > 0.0, "gaussian_field: sigma must be positive");
    FieldGrid g(origin, spacing, dims);
    const Eigen::Vector3d pol = polarization.normalized();
    g.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
        const double amp = std::exp(-(r - center).squaredNorm() / (2.0 * sigma * sigma));
        return pol.cast<std::complex<double>>() * amp;
    });
    g.normalize();
    return g;
}

// --- text import/export -----------------------------------------------------
//
// Format: a fixed magic line, three header lines (origin, spacing, dims),
// then one line per cell with six columns Re/Im of Ex, Ey, Ez, row-major
// with z fastest.

inline void save_field_grid(std::ostream& out, const FieldGrid& grid)
{
    out << "chi2qed-fieldgrid v1\n";
    char buf[512];
    std::snprintf(buf, sizeof buf, "origin %.17g %.17g %.17g\n", grid.origin()[0],
                  grid.origin()[1], grid.origin()[2]);
    out << buf;
    std::snprintf(buf, sizeof buf, "spacing %.17g %.17g %.17g\n", grid.spacing()[0],
                  grid.spacing()[1], grid.spacing()[2]);
    out << buf;
    std::snprintf(buf, sizeof buf, "dims %d %d %d\n", grid.dims()[0], grid.dims()[1],
                  grid.dims()[2]);
    out << buf;
    for (const auto& v : grid.values()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", v[0].real(),
                      v[0].imag(), v[1].real(), v[1].imag(), v[2].real(), v[2].imag());
        out << buf;
    }
}

inline FieldGrid load_field_grid(std::istream& in, bool enforce_normalized = true)
{
    auto fail = [](const std::string& why) -> void {
        throw std::domain_error("load_field_grid: malformed field grid file (" + why + ")");
    };

    std::string line;
    if (!std::getline(in, line) || line != "chi2qed-fieldgrid v1")
        fail("bad magic line");

    Eigen::Vector3d origin, spacing;
    std::array<int, 3> dims{};
    std::string tag;

    if (!std::getline(in, line))
        fail("missing origin");
    {
        std::istringstream s(line);
        if (!(s >> tag >> origin[0] >> origin[1] >> origin[2]) || tag != "origin")
            fail("bad origin line");
    }
    if (!std::getline(in, line))
        fail("missing spacing");
    {
        std::istringstream s(line);
        if (!(s >> tag >> spacing[0] >> spacing[1] >> spacing[2]) || tag != "spacing")
            fail("bad spacing line");
    }
    if (!std::getline(in, line))
        fail("missing dims");
    {
        std::istringstream s(line);
        if (!(s >> tag >> dims[0] >> dims[1] >> dims[2]) || tag != "dims")
            fail("bad dims line");
    }

    FieldGrid grid(origin, spacing, dims);
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        if (!std::getline(in, line))
            fail("truncated cell data");
        std::istringstream s(line);
        double re_x, im_x, re_y, im_y, re_z, im_z;
        if (!(s >> re_x >> im_x >> re_y >> im_y >> re_z >> im_z))
            fail("bad cell line");
        grid.values()[i] = Eigen::Vector3cd(std::complex<double>(re_x, im_x),
                                            std::complex<double>(re_y, im_y),
                                            std::complex<double>(re_z, im_z));
    }

    if (enforce_normalized && !grid.is_normalized(1e-9))
        throw std::domain_error(
            "load_field_grid: field is not normalized to unit maximum (use normalize)");
    return grid;
}

} // namespace chi2qed
