#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "chi2qed/cavity.hpp"
#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"
#include "chi2qed/integrate.hpp"
#include "chi2qed/reduced.hpp"
#include "chi2qed/subsystem.hpp"

namespace chi2qed {

/// Fock-space truncation: mode a keeps levels 0..n_a, mode b keeps 0..n_b.
struct FockTruncation {
    int n_a = 1;
    int n_b = 2;

    int dim() const { return (n_a + 1) * (n_b + 1); }
    /// Basis ordering: |na, nb> -> na * (n_b + 1) + nb.
    int index(int na, int nb) const
    {
        detail::require(na >= 0 && na <= n_a && nb >= 0 && nb <= n_b,
                        "FockTruncation: occupation outside truncation");
        return na * (n_b + 1) + nb;
    }
};

/// Density matrix of the two cavities on the truncated space, with the
/// consistency checks the evolution is expected to preserve.
struct DensityMatrix {
    FockTruncation trunc;
    Eigen::MatrixXcd rho;

    static DensityMatrix fock_state(const FockTruncation& trunc, int na, int nb)
    {
        DensityMatrix d;
        d.trunc = trunc;
        d.rho = Eigen::MatrixXcd::Zero(trunc.dim(), trunc.dim());
        const int i = trunc.index(na, nb);
        d.rho(i, i) = 1.0;
        return d;
    }

    double trace() const { return rho.trace().real(); }
    double hermiticity_error() const
    {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

namespace detail {

inline Eigen::MatrixXd lowering_operator(int levels)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(levels, levels);
    for (int n = 1; n < levels; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y)
{
    Eigen::MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
}

} // namespace detail

/// Right-hand side of the master equation
///   rho' = -i [H, rho]/hbar
///          - (1/(2 tau_a))(a+a rho + rho a+a) + (1/tau_a) a rho a+
///          - (1/(2 tau_b))(b+b rho + rho b+b) + (1/tau_b) b rho b+
/// in the rotating frame, with the detuning folded into H as a diagonal
/// Delta a+a term. The interaction is Omega (a b+^2 + a+ b^2) for the
/// two-mode scheme and |alpha| Omega (a b+ + a+ b) for the seeded one.
class LindbladGenerator {
public:
    LindbladGenerator(Scheme scheme, double omega_coupling, double seed_amplitude,
                      double tau_a, double tau_b, double detuning,
                      const FockTruncation& trunc)
        : trunc_(trunc), rate_a_(1.0 / tau_a), rate_b_(1.0 / tau_b)
    {
        detail::require(tau_a > 0.0 && tau_b > 0.0,
                        "LindbladGenerator: lifetimes must be positive");
        detail::require(trunc.n_a >= 1, "LindbladGenerator: need n_a >= 1");
        detail::require(trunc.n_b >= (scheme == Scheme::TwoMode ? 2 : 1),
                        "LindbladGenerator: mode-b truncation too small for the scheme");

        const int da = trunc.n_a + 1;
        const int db = trunc.n_b + 1;
        const Eigen::MatrixXd a1 = detail::lowering_operator(da);
        const Eigen::MatrixXd b1 = detail::lowering_operator(db);
        const Eigen::MatrixXd ia = Eigen::MatrixXd::Identity(da, da);
        const Eigen::MatrixXd ib = Eigen::MatrixXd::Identity(db, db);

        a_ = detail::kron(a1, ib);
        b_ = detail::kron(ia, b1);

        Eigen::MatrixXd h;
        if (scheme == Scheme::TwoMode) {
            const Eigen::MatrixXd ab2 = a_ * b_.transpose() * b_.transpose();
            h = omega_coupling * (ab2 + ab2.transpose());
        } else {
            const Eigen::MatrixXd ab = a_ * b_.transpose();
            h = seed_amplitude * omega_coupling * (ab + ab.transpose());
        }
        h += detuning * a_.transpose() * a_;
        h_ = h;

        num_a_ = a_.transpose() * a_;
        num_b_ = b_.transpose() * b_;
        g_eff_ = scheme == Scheme::TwoMode ? std::sqrt(2.0) * omega_coupling
                                           : seed_amplitude * omega_coupling;
        detuning_ = detuning;
    }

    static LindbladGenerator from_system(const CoupledSystem& system,
                                         const FockTruncation& trunc)
    {
        return LindbladGenerator(system.scheme(), system.omega_coupling(),
                                 system.seed_amplitude(), system.mode_a().lifetime(),
                                 system.mode_b().lifetime(), system.detuning(), trunc);
    }

    const FockTruncation& truncation() const { return trunc_; }
    const Eigen::MatrixXd& hamiltonian_over_hbar() const { return h_; }
    const Eigen::MatrixXd& lowering_a() const { return a_; }
    const Eigen::MatrixXd& lowering_b() const { return b_; }
    const Eigen::MatrixXd& number_a() const { return num_a_; }
    const Eigen::MatrixXd& number_b() const { return num_b_; }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const
    {
        const std::complex<double> minus_i(0.0, -1.0);
        Eigen::MatrixXcd drho = minus_i * (h_ * rho - rho * h_);
        drho += rate_a_ * (a_ * rho * a_.transpose()) -
                0.5 * rate_a_ * (num_a_ * rho + rho * num_a_);
        drho += rate_b_ * (b_ * rho * b_.transpose()) -
                0.5 * rate_b_ * (num_b_ * rho + rho * num_b_);
        return drho;
    }

    /// Shortest timescale, used for the default integration step.
    double min_timescale(double fallback) const
    {
        double tau = fallback;
        if (rate_a_ > 0.0)
            tau = std::min(tau, 1.0 / rate_a_);
        if (rate_b_ > 0.0)
            tau = std::min(tau, 1.0 / rate_b_);
        if (g_eff_ > 0.0)
            tau = std::min(tau, 1.0 / (2.0 * g_eff_));
        if (detuning_ != 0.0)
            tau = std::min(tau, 1.0 / std::abs(detuning_));
        return tau;
    }

private:
    FockTruncation trunc_;
    double rate_a_;
    double rate_b_;
    double g_eff_ = 0.0;
    double detuning_ = 0.0;
    Eigen::MatrixXd h_;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd b_;
    Eigen::MatrixXd num_a_;
    Eigen::MatrixXd num_b_;
};

inline LindbladGenerator build_lindblad(const CoupledSystem& system,
                                        const FockTruncation& trunc)
{
    return LindbladGenerator::from_system(system, trunc);
}

struct LindbladTrace {
    std::vector<double> times;
    std::vector<SubsystemState> states;  // subsystem projection, see below
    std::vector<double> mean_photons_a;
    std::vector<double> mean_photons_b;
    DensityMatrix final_state;
};

/// Project a full density matrix onto the closed-subsystem bookkeeping:
/// for the two-mode scheme |1> = |1,0>, |2> = |0,2>, |3> = |0,1>, |4> = |0,0>;
/// for the seeded scheme |1> = |1,0>, |2> = |0,1>, |3> = |0,0>.
inline SubsystemState project_subsystem(const Eigen::MatrixXcd& rho,
                                        const FockTruncation& trunc, Scheme scheme)
{
    SubsystemState s;
    const int i1 = trunc.index(1, 0);
    if (scheme == Scheme::TwoMode) {
        const int i2 = trunc.index(0, 2);
        s.rho11 = rho(i1, i1).real();
        s.rho22 = rho(i2, i2).real();
        s.rho33 = rho(trunc.index(0, 1), trunc.index(0, 1)).real();
        s.rho44 = rho(trunc.index(0, 0), trunc.index(0, 0)).real();
        s.im_v = (rho(i1, i2) - rho(i2, i1)).imag();
    } else {
        const int i2 = trunc.index(0, 1);
        s.rho11 = rho(i1, i1).real();
        s.rho22 = rho(i2, i2).real();
        s.rho33 = rho(trunc.index(0, 0), trunc.index(0, 0)).real();
        s.rho44 = 0.0;
        s.im_v = (rho(i1, i2) - rho(i2, i1)).imag();
    }
    return s;
}

/// Fixed-step RK4 evolution of the full master equation.
inline LindbladTrace evolve_lindblad(const LindbladGenerator& gen, const DensityMatrix& initial,
                                     Scheme scheme, double t_final, double dt_max = 0.0,
                                     std::int64_t sample_stride = 1)
{
    detail::require(t_final > 0.0, "evolve_lindblad: t_final must be positive");
    detail::require(initial.trunc.dim() == gen.truncation().dim(),
                    "evolve_lindblad: initial state truncation mismatch");
    detail::require(sample_stride >= 1, "evolve_lindblad: sample stride must be >= 1");

    double dt_req = gen.min_timescale(t_final) / 50.0;
    if (dt_max > 0.0)
        dt_req = std::min(dt_req, dt_max);
    const std::int64_t n_steps = step_count(t_final, dt_req);
    const double dt = t_final / static_cast<double>(n_steps);

    Eigen::MatrixXcd rho = initial.rho;
    auto rhs = [&gen](double, const Eigen::MatrixXcd& r) { return gen.apply(r); };

    LindbladTrace trace;
    auto record = [&](std::int64_t step) {
        trace.times.push_back(static_cast<double>(step) * dt);
        trace.states.push_back(project_subsystem(rho, gen.truncation(), scheme));
        trace.mean_photons_a.push_back((gen.number_a() * rho).trace().real());
        trace.mean_photons_b.push_back((gen.number_b() * rho).trace().real());
    };

    record(0);
    for (std::int64_t step = 0; step < n_steps; ++step) {
        rho = rk4_step(rho, static_cast<double>(step) * dt, dt, rhs);
        if ((step + 1) % sample_stride == 0 || step + 1 == n_steps)
            record(step + 1);
    }
    trace.final_state = DensityMatrix{gen.truncation(), std::move(rho)};
    return trace;
}

} // namespace chi2qed
