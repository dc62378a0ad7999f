#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "chi2qed/cavity.hpp"
#include "chi2qed/field_grid.hpp"
#include "chi2qed/overlap.hpp"
#include "chi2qed/tensor.hpp"
#include "oracles.hpp"

using namespace chi2qed;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

const Eigen::Vector3d x_hat(1, 0, 0);
const Eigen::Vector3d y_hat(0, 1, 0);
const Eigen::Vector3d z_hat(0, 0, 1);

FieldGrid sine_product_grid(double length, int n, const Eigen::Vector3d& pol,
                            int mx, int my, int mz)
{
    FieldGrid g(Eigen::Vector3d::Zero(), Eigen::Vector3d::Constant(length / n), {n, n, n});
    g.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
        const double amp = std::sin(mx * kPi * r.x() / length) *
                           std::sin(my * kPi * r.y() / length) *
                           std::sin(mz * kPi * r.z() / length);
        return pol.cast<std::complex<double>>() * amp;
    });
    return g;
}

} // namespace

TEST_CASE("constant aligned fields integrate to the contraction times the volume")
{
    const double length = 2.5e-6;
    const Eigen::Vector3d pol = Eigen::Vector3d(1, 1, 1).normalized();
    const Eigen::Vector3d spacing = Eigen::Vector3d::Constant(length / 8);
    const auto f = constant_field(Eigen::Vector3d::Zero(), spacing, {8, 8, 8}, pol);
    const auto tensor = Chi2Tensor::zincblende(1.0);

    const std::complex<double> overlap = overlap_integral(tensor, f, f, f);
    const double volume = length * length * length;
    CHECK_THAT(overlap.real(), WithinRel(2.0 / std::sqrt(3.0) * volume, 1e-13));
    CHECK_THAT(overlap.imag(), WithinAbs(0.0, 1e-18));
}

TEST_CASE("separable standing waves match the closed-form product of 1-D integrals")
{
    const double length = 1.0;
    const int n = 48;
    const auto tensor = Chi2Tensor::zincblende(1.0);

    SECTION("fundamental mode cubed")
    {
        const auto fa = sine_product_grid(length, n, x_hat, 1, 1, 1);
        const auto fb = sine_product_grid(length, n, y_hat, 1, 1, 1);
        const auto fc = sine_product_grid(length, n, z_hat, 1, 1, 1);
        const double expected = std::pow(4.0 * length / (3.0 * kPi), 3);
        const auto overlap = overlap_integral(tensor, fa, fb, fc);
        CHECK_THAT(overlap.real(), WithinRel(expected, 1e-3));
        CHECK_THAT(overlap.imag(), WithinAbs(0.0, 1e-15));
    }

    SECTION("distinct longitudinal orders")
    {
        // Profiles vary along x only; uses int_0^L sin(a u) sin(b u) sin(c u)
        // with (a, b, c) = (1, 2, 4) pi/L, nonzero because a+b+c is odd.
        const int ny = 2;
        FieldGrid fa(Eigen::Vector3d::Zero(),
                     Eigen::Vector3d(length / 128, length / ny, length / ny), {128, ny, ny});
        FieldGrid fb = fa, fc = fa;
        auto fill_x = [&](FieldGrid& g, const Eigen::Vector3d& pol, int m) {
            g.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
                return pol.cast<std::complex<double>>() *
                       std::sin(m * kPi * r.x() / length);
            });
        };
        fill_x(fa, x_hat, 1);
        fill_x(fb, y_hat, 2);
        fill_x(fc, z_hat, 4);

        const double one_d =
            length / (2.0 * kPi) * (1.0 / 3.0 + 1.0 / 5.0 - 1.0 / 7.0 - 1.0);
        const double expected = one_d * length * length;  // times the transverse window
        const auto overlap = overlap_integral(tensor, fa, fb, fc);
        CHECK_THAT(overlap.real(), WithinRel(expected, 1e-3));
    }
}

TEST_CASE("gaussian envelopes match the erf closed form")
{
    const double length = 1.0;
    const int n = 65;  // odd so the peak sits on a cell center
    const double sigma = length / 6.0;
    const Eigen::Vector3d center = Eigen::Vector3d::Constant(length / 2);
    const Eigen::Vector3d spacing = Eigen::Vector3d::Constant(length / n);

    const auto fa = gaussian_field(Eigen::Vector3d::Zero(), spacing, {n, n, n}, x_hat,
                                   center, sigma);
    const auto fb = gaussian_field(Eigen::Vector3d::Zero(), spacing, {n, n, n}, y_hat,
                                   center, sigma);
    const auto fc = gaussian_field(Eigen::Vector3d::Zero(), spacing, {n, n, n}, z_hat,
                                   center, sigma);
    CHECK(fa.is_normalized(1e-12));

    const double s = sigma / std::sqrt(3.0);  // product of three gaussians
    const double one_d =
        s * std::sqrt(2.0 * kPi) * std::erf(length / (2.0 * std::sqrt(2.0) * s));
    const double expected = std::pow(one_d, 3);
    const auto overlap = overlap_integral(Chi2Tensor::zincblende(1.0), fa, fb, fc);
    CHECK_THAT(overlap.real(), WithinRel(expected, 3e-3));
}

TEST_CASE("travelling waves reproduce the sinc phase-matching envelope")
{
    const double length = 1.0;
    const int nx = 256, nw = 2;
    const Eigen::Vector3d spacing(length / nx, length / nw, length / nw);
    const double area = length * length;  // transverse window
    const auto tensor = Chi2Tensor::zincblende(1.0);

    const double k2 = 2.0 * kPi * 3.0 / length;
    const double k3 = -2.0 * kPi * 1.0 / length;

    auto overlap_at = [&](double delta_k, double phase_a) {
        const double k1 = delta_k - k2 - k3;
        const auto fa = plane_wave_field(Eigen::Vector3d::Zero(), spacing, {nx, nw, nw},
                                         x_hat, Eigen::Vector3d(k1, 0, 0), phase_a);
        const auto fb = plane_wave_field(Eigen::Vector3d::Zero(), spacing, {nx, nw, nw},
                                         y_hat, Eigen::Vector3d(k2, 0, 0));
        const auto fc = plane_wave_field(Eigen::Vector3d::Zero(), spacing, {nx, nw, nw},
                                         z_hat, Eigen::Vector3d(k3, 0, 0));
        return overlap_integral(tensor, fa, fb, fc);
    };

    SECTION("magnitude follows |sinc(dk L / 2)|")
    {
        for (double m : {0.0, 0.25, 0.5, 0.75, 1.5}) {
            const double delta_k = m * 2.0 * kPi / length;
            const double expected =
                length * area * std::abs(oracles::sinc(0.5 * delta_k * length));
            CHECK_THAT(std::abs(overlap_at(delta_k, 0.0)),
                       WithinAbs(expected, 2e-3 * length * area));
        }
    }

    SECTION("exact null at dk L = 2 pi")
    {
        CHECK_THAT(std::abs(overlap_at(2.0 * kPi / length, 0.0)),
                   WithinAbs(0.0, 1e-10 * length * area));
    }

    SECTION("a global phase shift moves the real part but not the magnitude")
    {
        const double delta_k = 0.6 * 2.0 * kPi / length;
        const auto base = overlap_at(delta_k, 0.0);
        const auto shifted = overlap_at(delta_k, 1.0);
        CHECK_THAT(std::abs(shifted), WithinRel(std::abs(base), 1e-12));
        CHECK(std::abs(shifted.real() - base.real()) > 0.1 * std::abs(base));
    }
}

TEST_CASE("standing-wave overlap does not move under a rigid translation")
{
    const double length = 1.0;
    const int n = 32;
    const Eigen::Vector3d spacing = Eigen::Vector3d::Constant(length / n);
    const Eigen::Vector3d k(kPi / length, kPi / length, kPi / length);
    const auto tensor = Chi2Tensor::zincblende(1.0);

    auto overlap_for_origin = [&](const Eigen::Vector3d& origin) {
        const auto fa = standing_wave_field(origin, spacing, {n, n, n}, x_hat, k, origin);
        const auto fb = standing_wave_field(origin, spacing, {n, n, n}, y_hat, k, origin);
        const auto fc = standing_wave_field(origin, spacing, {n, n, n}, z_hat, k, origin);
        return overlap_integral(tensor, fa, fb, fc);
    };

    const auto at_zero = overlap_for_origin(Eigen::Vector3d::Zero());
    const auto moved = overlap_for_origin(Eigen::Vector3d(0.37, -1.4, 2.9));
    CHECK_THAT(std::abs(moved), WithinRel(std::abs(at_zero), 1e-9));
    CHECK_THAT(at_zero.imag(), WithinAbs(0.0, 1e-15 * std::abs(at_zero)));
}

TEST_CASE("midpoint quadrature converges at second order")
{
    // Integrand with non-vanishing boundary slopes so the leading h^2 term
    // survives: a shifted sine along x times constant transverse fields.
    const double length = 1.0;
    const double shift = 0.3 * length;
    const auto tensor = Chi2Tensor::zincblende(1.0);
    const double expected = 2.0 * length / kPi * std::cos(0.3 * kPi) * length * length;

    auto quadrature_error = [&](int n) {
        FieldGrid fa(Eigen::Vector3d::Zero(),
                     Eigen::Vector3d(length / n, length / 2, length / 2), {n, 2, 2});
        fa.fill([&](const Eigen::Vector3d& r) -> Eigen::Vector3cd {
            return x_hat.cast<std::complex<double>>() *
                   std::sin(kPi * (r.x() + shift) / length);
        });
        const auto fb = constant_field(Eigen::Vector3d::Zero(),
                                       Eigen::Vector3d(length / n, length / 2, length / 2),
                                       {n, 2, 2}, y_hat);
        const auto fc = constant_field(Eigen::Vector3d::Zero(),
                                       Eigen::Vector3d(length / n, length / 2, length / 2),
                                       {n, 2, 2}, z_hat);
        return std::abs(overlap_integral(tensor, fa, fb, fc).real() - expected);
    };

    const double e16 = quadrature_error(16);
    const double e32 = quadrature_error(32);
    const double e64 = quadrature_error(64);
    CHECK(e16 / e32 >= 3.8);
    CHECK(e32 / e64 >= 3.8);
    CHECK(std::log2(e16 / e32) >= 1.9);
    CHECK(std::log2(e32 / e64) >= 1.9);
}

TEST_CASE("overlap_integral rejects mismatched grids")
{
    const Eigen::Vector3d spacing = Eigen::Vector3d::Constant(0.1);
    const auto a = constant_field(Eigen::Vector3d::Zero(), spacing, {4, 4, 4}, x_hat);
    const auto wrong_dims = constant_field(Eigen::Vector3d::Zero(), spacing, {4, 4, 5}, x_hat);
    const auto wrong_origin =
        constant_field(Eigen::Vector3d(1, 0, 0), spacing, {4, 4, 4}, x_hat);
    const auto wrong_spacing =
        constant_field(Eigen::Vector3d::Zero(), 2.0 * spacing, {4, 4, 4}, x_hat);
    CHECK_THROWS_AS(overlap_integral(Chi2Tensor::zincblende(1.0), a, a, wrong_dims),
                    std::domain_error);
    CHECK_THROWS_AS(overlap_integral(Chi2Tensor::zincblende(1.0), a, wrong_origin, a),
                    std::domain_error);
    CHECK_THROWS_AS(overlap_integral(Chi2Tensor::zincblende(1.0), wrong_spacing, a, a),
                    std::domain_error);
}

TEST_CASE("coupling constant from the overlap shortcut")
{
    const double q = 18000.0, n_ref = 3.4, chi = 200e-12;
    const double lambda_a = 0.75e-6, lambda_b = 1.5e-6;
    const double v_a = mode_volume(lambda_a, n_ref, 0.7);
    const double v_b = mode_volume(lambda_b, n_ref, 0.7);
    const CavityMode mode_a(lambda_a, q, n_ref, v_a);
    const CavityMode mode_b(lambda_b, q, n_ref, v_b);
    const CavityMode mode_c(lambda_b, q, n_ref, v_b);  // V_c at its own wavelength

    const double overlap = overlap_shortcut(chi, v_a);
    CHECK_THAT(overlap, WithinRel(0.5 * chi * v_a, 1e-15));

    SECTION("zero overlap gives zero coupling")
    {
        const auto sys = CoupledSystem::three_mode(mode_a, mode_b, mode_c, 0.0, 1.0);
        CHECK(coupling_constant(sys, 0.0) == 0.0);
    }

    SECTION("seeded PCDMC estimate brackets the published 5 ns half period")
    {
        const auto sys = CoupledSystem::three_mode(mode_a, mode_b, mode_c, 0.0, 1.0);
        const double omega = coupling_constant(sys, overlap);

        // Closed-form product evaluated from scratch.
        const double hbar = 1.054571817e-34, eps0 = 8.8541878128e-12, c = 2.99792458e8;
        auto zpf = [&](double lambda, double volume) {
            const double w = 2.0 * kPi * c / lambda;
            return std::sqrt(hbar * w / (2.0 * eps0 * n_ref * n_ref * volume));
        };
        const double expected = eps0 / hbar * zpf(lambda_a, v_a) * zpf(lambda_b, v_b) *
                                zpf(lambda_b, v_b) * overlap;
        CHECK_THAT(omega, WithinRel(expected, 1e-12));

        const double half_period = kPi / omega;
        CHECK(half_period > 2e-9);
        CHECK(half_period < 15e-9);
    }

    SECTION("Omega scales as 1/sqrt(V) when volumes double at fixed overlap/V_a")
    {
        const auto base = CoupledSystem::three_mode(mode_a, mode_b, mode_c, 0.0, 1.0);
        const CavityMode big_a(lambda_a, q, n_ref, 2.0 * v_a);
        const CavityMode big_b(lambda_b, q, n_ref, 2.0 * v_b);
        const auto doubled = CoupledSystem::three_mode(big_a, big_b, big_b, 0.0, 1.0);
        const double omega_base = coupling_constant(base, overlap_shortcut(chi, v_a));
        const double omega_doubled =
            coupling_constant(doubled, overlap_shortcut(chi, 2.0 * v_a));
        CHECK_THAT(omega_doubled / omega_base, WithinRel(1.0 / std::sqrt(2.0), 1e-12));
    }

    SECTION("non-finite overlap is rejected")
    {
        const auto sys = CoupledSystem::two_mode(mode_a, mode_b, 0.0);
        CHECK_THROWS_AS(
            coupling_constant(sys, std::numeric_limits<double>::quiet_NaN()),
            std::domain_error);
    }
}

TEST_CASE("field grid text format round-trips exactly")
{
    const Eigen::Vector3d spacing(0.25e-6, 0.5e-6, 0.125e-6);
    auto grid = plane_wave_field(Eigen::Vector3d(1e-6, -2e-6, 0.0), spacing, {3, 4, 5},
                                 Eigen::Vector3d(1, 2, 2).normalized(),
                                 Eigen::Vector3d(1e6, -2e6, 0.5e6), 0.7);
    std::stringstream buffer;
    save_field_grid(buffer, grid);
    const FieldGrid loaded = load_field_grid(buffer);

    REQUIRE(loaded.dims() == grid.dims());
    CHECK(loaded.origin() == grid.origin());
    CHECK(loaded.spacing() == grid.spacing());
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
        CHECK(loaded.values()[i] == grid.values()[i]);
}

TEST_CASE("field grid loader rejects malformed and unnormalized input")
{
    std::stringstream bad_magic("not a grid\n");
    CHECK_THROWS_AS(load_field_grid(bad_magic), std::domain_error);

    std::stringstream truncated(
        "chi2qed-fieldgrid v1\norigin 0 0 0\nspacing 1 1 1\ndims 2 1 1\n1 0 0 0 0 0\n");
    CHECK_THROWS_AS(load_field_grid(truncated), std::domain_error);

    std::stringstream small(
        "chi2qed-fieldgrid v1\norigin 0 0 0\nspacing 1 1 1\ndims 1 1 1\n0.5 0 0 0 0 0\n");
    CHECK_THROWS_AS(load_field_grid(small), std::domain_error);
    std::stringstream small_again(
        "chi2qed-fieldgrid v1\norigin 0 0 0\nspacing 1 1 1\ndims 1 1 1\n0.5 0 0 0 0 0\n");
    FieldGrid relaxed = load_field_grid(small_again, false);
    relaxed.normalize();
    CHECK(relaxed.is_normalized());
}
