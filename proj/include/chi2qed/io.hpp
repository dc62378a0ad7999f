#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chi2qed/feasibility.hpp"
#include "chi2qed/spectrum.hpp"
#include "chi2qed/subsystem.hpp"

namespace chi2qed {

/// Shortest round-trippable decimal representation, fixed across runs so
/// outputs are byte-identical for identical inputs.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// `#`-prefixed metadata lines: tool version plus the fully resolved
/// parameter set, sorted by key.
inline void write_metadata_header(std::ostream& out, const std::string& command,
                                  const std::map<std::string, std::string>& params)
{
    out << "# chi2qed 0.1.0\n";
    out << "# command: " << command << "\n";
    for (const auto& [key, value] : params)
        out << "# " << key << " = " << value << "\n";
}

inline const char* scheme_name(Scheme scheme)
{
    return scheme == Scheme::TwoMode ? "two-mode" : "three-mode";
}

inline void write_trace_csv(std::ostream& out, const SimulationTrace& trace)
{
    out << "t,rho11,rho22,rho33,rho44,imV,trace_total\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const SubsystemState& s = trace.states[i];
        out << format_double(trace.times[i]) << ',' << format_double(s.rho11) << ','
            << format_double(s.rho22) << ',' << format_double(s.rho33) << ','
            << format_double(s.rho44) << ',' << format_double(s.im_v) << ','
            << format_double(s.total_population()) << "\n";
    }
}

inline nlohmann::json trace_to_json(const SimulationTrace& trace)
{
    nlohmann::json j;
    j["scheme"] = scheme_name(trace.metadata.scheme);
    j["g"] = trace.metadata.g;
    j["gamma1"] = trace.metadata.gamma1;
    j["gamma2"] = trace.metadata.gamma2;
    j["detuning"] = trace.metadata.detuning;
    j["dt"] = trace.metadata.dt;
    j["t_final"] = trace.metadata.t_final;
    j["t"] = trace.times;
    auto column = [&](auto member) {
        std::vector<double> xs;
        xs.reserve(trace.states.size());
        for (const auto& s : trace.states)
            xs.push_back(s.*member);
        return xs;
    };
    j["rho11"] = column(&SubsystemState::rho11);
    j["rho22"] = column(&SubsystemState::rho22);
    j["rho33"] = column(&SubsystemState::rho33);
    j["rho44"] = column(&SubsystemState::rho44);
    j["imV"] = column(&SubsystemState::im_v);
    return j;
}

/// Two-column curve export: omega (rad/s), S (dimensionless).
inline void write_spectrum_csv(std::ostream& out, const SpectrumCurve& curve)
{
    out << "omega,S\n";
    for (std::size_t i = 0; i < curve.omega.size(); ++i)
        out << format_double(curve.omega[i]) << ',' << format_double(curve.value[i]) << "\n";
}

/// One avoided-crossing row per detuning sample.
struct AvoidedCrossingRow {
    double delta;        // rad/s
    double e_plus;       // rad/s (E+/hbar)
    double e_minus;      // rad/s
    double gamma_plus;   // rad/s
    double gamma_minus;  // rad/s
};

inline void write_avoided_crossing_csv(std::ostream& out,
                                       const std::vector<AvoidedCrossingRow>& rows)
{
    out << "delta,e_plus_over_hbar,e_minus_over_hbar,gamma_plus,gamma_minus\n";
    for (const auto& r : rows)
        out << format_double(r.delta) << ',' << format_double(r.e_plus) << ','
            << format_double(r.e_minus) << ',' << format_double(r.gamma_plus) << ','
            << format_double(r.gamma_minus) << "\n";
}

inline nlohmann::json report_to_json(const FeasibilityReport& report)
{
    nlohmann::json j;
    j["platform"] = platform_name(report.platform);
    j["assumptions"] = report.assumptions;
    j["tau_a"] = report.tau_a;
    j["tau_b"] = report.tau_b;
    j["tau_eff"] = report.tau_eff;
    j["omega_single"] = report.omega_single;
    j["omega_two_mode"] = report.omega_two_mode;
    j["half_period_coeff"] = report.half_period_coeff;
    j["n_min_time"] = report.n_min_time;
    j["n_min_spectral"] = report.n_min_spectral;
    j["unseeded_half_period"] = report.unseeded_half_period;
    j["unseeded_gap_orders"] = report.unseeded_gap_orders;
    j["unseeded_gap_orders_computed"] = report.unseeded_gap_orders_computed;
    j["gap_label"] = report.gap_label;
    j["published"] = {
        {"tau_eff", report.published.tau_eff},
        {"half_period_coeff", report.published.half_period_coeff},
        {"unseeded_half_period", report.published.unseeded_half_period},
        {"photon_threshold", report.published.photon_threshold},
    };
    j["notes"] = report.notes;
    return j;
}

inline void write_report_text(std::ostream& out, const FeasibilityReport& report)
{
    out << "platform: " << platform_name(report.platform) << "\n";
    out << "assumptions: " << report.assumptions << "\n";
    out << "tau_a: " << format_double(report.tau_a) << " s\n";
    out << "tau_b: " << format_double(report.tau_b) << " s\n";
    out << "tau_eff: " << format_double(report.tau_eff) << " s\n";
    out << "omega_single: " << format_double(report.omega_single) << " rad/s\n";
    out << "omega_two_mode: " << format_double(report.omega_two_mode) << " rad/s\n";
    out << "half_period_coeff: " << format_double(report.half_period_coeff) << " s\n";
    out << "n_min_time: " << format_double(report.n_min_time) << " per f_c\n";
    out << "n_min_spectral: " << format_double(report.n_min_spectral) << " per f_c\n";
    out << "unseeded_half_period: " << format_double(report.unseeded_half_period) << " s\n";
    out << "unseeded_gap_orders: " << format_double(report.unseeded_gap_orders)
        << " (vs published period; computed period gives "
        << format_double(report.unseeded_gap_orders_computed) << ")\n";
    out << "gap_label: " << report.gap_label << "\n";
    out << "published_tau_eff: " << format_double(report.published.tau_eff) << " s\n";
    out << "published_half_period_coeff: "
        << format_double(report.published.half_period_coeff) << " s\n";
    out << "published_unseeded_half_period: "
        << format_double(report.published.unseeded_half_period) << " s\n";
    out << "published_photon_threshold: "
        << format_double(report.published.photon_threshold) << " per f_c\n";
    for (const auto& note : report.notes)
        out << "note: " << note << "\n";
}

} // namespace chi2qed
