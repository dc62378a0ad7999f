#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "chi2qed/lindblad.hpp"
#include "chi2qed/reduced.hpp"
#include "chi2qed/subsystem.hpp"

using namespace chi2qed;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

/// Difference between the closed-subsystem evolution and the full master
/// equation, max over samples and the five tracked components.
double max_subsystem_deviation(Scheme scheme, double omega, double alpha, double tau_a,
                               double tau_b, double t_final)
{
    ReducedModel model;
    model.scheme = scheme;
    model.gamma1 = 1.0 / tau_a;
    if (scheme == Scheme::TwoMode) {
        model.g = std::sqrt(2.0) * omega;
        model.gamma2 = 2.0 / tau_b;
    } else {
        model.g = alpha * omega;
        model.gamma2 = 1.0 / tau_b;
    }

    const FockTruncation trunc{1, scheme == Scheme::TwoMode ? 2 : 1};
    const LindbladGenerator gen(scheme, omega, alpha, tau_a, tau_b, 0.0, trunc);

    double dt = std::min(suggested_step(model, t_final), gen.min_timescale(t_final) / 50.0);
    dt = std::min(dt, t_final / 400.0) / 2.0;

    SubsystemState initial;
    initial.rho11 = 1.0;
    const auto closed = evolve_subsystem(model, initial, t_final, dt);
    const auto full = evolve_lindblad(gen, DensityMatrix::fock_state(trunc, 1, 0), scheme,
                                      t_final, dt);

    REQUIRE(closed.times.size() == full.times.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < closed.times.size(); ++i) {
        const auto& a = closed.states[i];
        const auto& b = full.states[i];
        worst = std::max({worst, std::abs(a.rho11 - b.rho11), std::abs(a.rho22 - b.rho22),
                          std::abs(a.rho33 - b.rho33), std::abs(a.rho44 - b.rho44),
                          std::abs(a.im_v - b.im_v)});
    }
    return worst;
}

} // namespace

TEST_CASE("uncoupled master equation decays the photon number exponentially")
{
    const double tau_a = 9.5e-12;
    const FockTruncation trunc{1, 2};
    const LindbladGenerator gen(Scheme::TwoMode, 0.0, 0.0, tau_a, 7e-12, 0.0, trunc);
    const auto trace = evolve_lindblad(gen, DensityMatrix::fock_state(trunc, 1, 0),
                                       Scheme::TwoMode, 5.0 * tau_a);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        CHECK_THAT(trace.mean_photons_a[i],
                   WithinAbs(std::exp(-trace.times[i] / tau_a), 1e-8));
}

TEST_CASE("two-mode dynamics from |1,0> stays in the four-state subspace")
{
    const double omega = 2e11, tau_a = 9.5e-12, tau_b = 9.5e-12;
    const FockTruncation trunc{1, 2};
    const LindbladGenerator gen(Scheme::TwoMode, omega, 0.0, tau_a, tau_b, 0.0, trunc);
    const auto trace = evolve_lindblad(gen, DensityMatrix::fock_state(trunc, 1, 0),
                                       Scheme::TwoMode, 40e-12);

    const auto& rho = trace.final_state.rho;
    // Populations outside {|1,0>, |0,2>, |0,1>, |0,0>} stay numerically zero.
    const int outside[] = {trunc.index(1, 1), trunc.index(1, 2)};
    for (int idx : outside)
        CHECK_THAT(rho(idx, idx).real(), WithinAbs(0.0, 1e-12));

    CHECK(trace.final_state.hermiticity_error() < 1e-10);
    CHECK(trace.final_state.min_eigenvalue() > -1e-8);
    CHECK_THAT(trace.final_state.trace(), WithinAbs(1.0, 1e-8));
}

TEST_CASE("master equation agrees with the closed subsystem")
{
    SECTION("strong coupling")
    {
        CHECK(max_subsystem_deviation(Scheme::TwoMode, 4e11, 0.0, 9.5e-12, 9.5e-12,
                                      60e-12) < 1e-7);
    }
    SECTION("weak coupling")
    {
        CHECK(max_subsystem_deviation(Scheme::TwoMode, 1e10, 0.0, 9.5e-12, 20e-12,
                                      60e-12) < 1e-7);
    }
    SECTION("seeded scheme")
    {
        CHECK(max_subsystem_deviation(Scheme::ThreeMode, 4e8, 1e3, 7.2e-12, 14.3e-12,
                                      40e-12) < 1e-7);
    }
}

TEST_CASE("seeded dynamics with mapped parameters reproduces the two-mode curves")
{
    // sqrt(2) Omega <-> |alpha| Omega' and 2/tau_b <-> 1/tau_b': identical
    // reduced dynamics, hence identical populations.
    const double omega = 3e11, tau_a = 9.5e-12, tau_b = 12e-12;
    const double alpha = 50.0;
    const double omega_three = std::sqrt(2.0) * omega / alpha;
    const double tau_b_three = tau_b / 2.0;

    const FockTruncation trunc_two{1, 2};
    const LindbladGenerator two(Scheme::TwoMode, omega, 0.0, tau_a, tau_b, 0.0, trunc_two);
    const FockTruncation trunc_three{1, 1};
    const LindbladGenerator three(Scheme::ThreeMode, omega_three, alpha, tau_a, tau_b_three,
                                  0.0, trunc_three);

    const double t_final = 50e-12;
    const double dt =
        std::min(two.min_timescale(t_final), three.min_timescale(t_final)) / 100.0;
    const auto trace_two = evolve_lindblad(two, DensityMatrix::fock_state(trunc_two, 1, 0),
                                           Scheme::TwoMode, t_final, dt);
    const auto trace_three =
        evolve_lindblad(three, DensityMatrix::fock_state(trunc_three, 1, 0),
                        Scheme::ThreeMode, t_final, dt);

    REQUIRE(trace_two.times.size() == trace_three.times.size());
    for (std::size_t i = 0; i < trace_two.times.size(); ++i) {
        CHECK_THAT(trace_two.states[i].rho11,
                   WithinAbs(trace_three.states[i].rho11, 1e-8));
        CHECK_THAT(trace_two.states[i].rho22,
                   WithinAbs(trace_three.states[i].rho22, 1e-8));
        CHECK_THAT(trace_two.states[i].im_v, WithinAbs(trace_three.states[i].im_v, 1e-8));
    }
}

TEST_CASE("hermiticity and positivity hold along the evolution")
{
    const double omega = 5e11, tau_a = 8e-12, tau_b = 10e-12;
    const FockTruncation trunc{2, 4};
    const LindbladGenerator gen(Scheme::TwoMode, omega, 0.0, tau_a, tau_b, 0.0, trunc);
    auto rho = DensityMatrix::fock_state(trunc, 1, 0);

    const double t_final = 30e-12;
    const int slices = 6;
    for (int k = 0; k < slices; ++k) {
        const auto trace =
            evolve_lindblad(gen, rho, Scheme::TwoMode, t_final / slices);
        rho = trace.final_state;
        CHECK(rho.hermiticity_error() < 1e-10);
        CHECK(rho.min_eigenvalue() > -1e-8);
        CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-8));
    }
}

TEST_CASE("a larger truncation changes nothing for the closed initial state")
{
    const double omega = 3e11, tau_a = 9e-12, tau_b = 11e-12;
    const FockTruncation small{1, 2};
    const FockTruncation large{2, 4};
    const LindbladGenerator gen_small(Scheme::TwoMode, omega, 0.0, tau_a, tau_b, 0.0, small);
    const LindbladGenerator gen_large(Scheme::TwoMode, omega, 0.0, tau_a, tau_b, 0.0, large);

    const double t_final = 40e-12;
    const double dt =
        std::min(gen_small.min_timescale(t_final), gen_large.min_timescale(t_final)) / 50.0;
    const auto trace_small = evolve_lindblad(
        gen_small, DensityMatrix::fock_state(small, 1, 0), Scheme::TwoMode, t_final, dt);
    const auto trace_large = evolve_lindblad(
        gen_large, DensityMatrix::fock_state(large, 1, 0), Scheme::TwoMode, t_final, dt);

    REQUIRE(trace_small.times.size() == trace_large.times.size());
    for (std::size_t i = 0; i < trace_small.times.size(); ++i) {
        CHECK_THAT(trace_small.states[i].rho11,
                   WithinAbs(trace_large.states[i].rho11, 1e-9));
        CHECK_THAT(trace_small.states[i].rho22,
                   WithinAbs(trace_large.states[i].rho22, 1e-9));
    }
}

TEST_CASE("detuning enters as a diagonal term and gives the generalized Rabi contrast")
{
    const double omega = 2e11;
    const double g = std::sqrt(2.0) * omega;
    const double delta = 3.0 * g;
    const double omega_prime = std::sqrt(4.0 * g * g + delta * delta);
    const double huge_tau = 1.0;  // effectively lossless on these timescales

    const FockTruncation trunc{1, 2};
    const LindbladGenerator gen(Scheme::TwoMode, omega, 0.0, huge_tau, huge_tau, delta, trunc);
    const double period = 2.0 * kPi / omega_prime;
    const auto trace = evolve_lindblad(gen, DensityMatrix::fock_state(trunc, 1, 0),
                                       Scheme::TwoMode, 3.0 * period, period / 1000.0);

    double max_rho22 = 0.0;
    for (const auto& s : trace.states)
        max_rho22 = std::max(max_rho22, s.rho22);
    CHECK_THAT(max_rho22, WithinAbs(4.0 * g * g / (omega_prime * omega_prime), 1e-6));

    // The closed subsystem (with its extra coherence quadrature) tracks the
    // detuned master equation too.
    ReducedModel model;
    model.scheme = Scheme::TwoMode;
    model.g = g;
    model.gamma1 = 1.0 / huge_tau;
    model.gamma2 = 2.0 / huge_tau;
    model.detuning = delta;
    SubsystemState initial;
    initial.rho11 = 1.0;
    const auto closed =
        evolve_subsystem(model, initial, 3.0 * period, period / 1000.0);
    REQUIRE(closed.times.size() == trace.times.size());
    for (std::size_t i = 0; i < closed.times.size(); ++i) {
        CHECK_THAT(closed.states[i].rho11, WithinAbs(trace.states[i].rho11, 1e-7));
        CHECK_THAT(closed.states[i].rho22, WithinAbs(trace.states[i].rho22, 1e-7));
    }
}

TEST_CASE("truncation limits are enforced")
{
    CHECK_THROWS_AS(FockTruncation{}.index(2, 0), std::domain_error);
    CHECK_THROWS_AS(
        LindbladGenerator(Scheme::TwoMode, 1e9, 0.0, 1e-12, 1e-12, 0.0, FockTruncation{1, 1}),
        std::domain_error);
    CHECK_THROWS_AS(
        LindbladGenerator(Scheme::TwoMode, 1e9, 0.0, 1e-12, 1e-12, 0.0, FockTruncation{0, 2}),
        std::domain_error);
    CHECK_THROWS_AS(
        LindbladGenerator(Scheme::TwoMode, 1e9, 0.0, 0.0, 1e-12, 0.0, FockTruncation{1, 2}),
        std::domain_error);

    const FockTruncation trunc{1, 2};
    const LindbladGenerator gen(Scheme::ThreeMode, 1e9, 1.0, 1e-12, 1e-12, 0.0,
                                FockTruncation{1, 1});
    CHECK_THROWS_AS(evolve_lindblad(gen, DensityMatrix::fock_state(trunc, 1, 0),
                                    Scheme::ThreeMode, 1e-12),
                    std::domain_error);
}
