// Command-line front end: damped Rabi simulations, dressed-state spectra,
// platform feasibility reports, parameter sweeps, and overlap/contraction
// utilities. Core stays SI; unit suffixes (ps, ns, nm, um, THz, pm/V) are
// parsed here at the boundary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chi2qed/chi2qed.hpp"

namespace {

using chi2qed::format_double;
using nlohmann::json;

// --- parameter resolution -----------------------------------------------
//
// Flags override --config values which override built-in defaults. Every run
// echoes the fully resolved set into the output metadata.

class Params {
public:
    void load_config(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open config file: " + path);
        json doc = json::parse(in, nullptr, true, true);
        if (!doc.is_object())
            throw std::invalid_argument("config file must hold a JSON object");
        for (auto& [key, value] : doc.items()) {
            if (value.is_string())
                config_[key] = value.get<std::string>();
            else
                config_[key] = value.dump();
        }
    }

    /// flag value if given, else config value, else fallback.
    std::string resolve(const std::string& key, int flag_count, const std::string& flag_value,
                        const std::string& fallback)
    {
        std::string value = fallback;
        if (auto it = config_.find(key); it != config_.end())
            value = it->second;
        if (flag_count > 0)
            value = flag_value;
        resolved_[key] = value;
        return value;
    }

    bool was_set(const std::string& key, int flag_count) const
    {
        return flag_count > 0 || config_.count(key) > 0;
    }

    void note(const std::string& key, const std::string& value) { resolved_[key] = value; }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

private:
    std::map<std::string, std::string> config_;
    std::map<std::string, std::string> resolved_;
};

/// Output sink: "-" means stdout.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path != "-") {
            file_.open(path);
            if (!file_)
                throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

chi2qed::Scheme parse_scheme(const std::string& text)
{
    if (text == "two-mode")
        return chi2qed::Scheme::TwoMode;
    if (text == "three-mode")
        return chi2qed::Scheme::ThreeMode;
    throw std::invalid_argument("--scheme must be two-mode or three-mode, got '" + text + "'");
}

Eigen::Vector3d parse_vector3(const std::string& text, const char* flag)
{
    Eigen::Vector3d v;
    std::string part;
    std::istringstream s(text);
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(s, part, ','))
            throw std::invalid_argument(std::string(flag) + " needs three comma-separated "
                                                            "components, got '" +
                                        text + "'");
        v[i] = chi2qed::units::parse_plain(part, flag);
    }
    if (std::getline(s, part, ','))
        throw std::invalid_argument(std::string(flag) + " has too many components: '" + text +
                                    "'");
    return v;
}

/// Grid axis "start:stop:count[:log|lin]".
std::vector<double> parse_axis(const std::string& text, const char* flag)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream s(text);
    while (std::getline(s, part, ':'))
        parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument(std::string(flag) +
                                    " must be start:stop:count[:log|lin], got '" + text + "'");
    const double start = chi2qed::units::parse_plain(parts[0], flag);
    const double stop = chi2qed::units::parse_plain(parts[1], flag);
    const long count = std::lround(chi2qed::units::parse_plain(parts[2], flag));
    const bool log_scale = parts.size() == 4 && parts[3] == "log";
    if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin")
        throw std::invalid_argument(std::string(flag) + ": scale must be log or lin");
    if (count < 1)
        throw std::invalid_argument(std::string(flag) + ": count must be >= 1");
    if (log_scale && (start <= 0.0 || stop <= 0.0))
        throw std::invalid_argument(std::string(flag) + ": log axis needs positive bounds");

    std::vector<double> xs(count);
    if (count == 1) {
        xs[0] = start;
        return xs;
    }
    for (long i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        xs[i] = log_scale ? start * std::pow(stop / start, t) : start + (stop - start) * t;
    }
    return xs;
}

chi2qed::ReducedModel make_model(chi2qed::Scheme scheme, double tau_a, double tau_b,
                                 double omega, double alpha, double detuning)
{
    chi2qed::ReducedModel m;
    m.scheme = scheme;
    m.detuning = detuning;
    m.gamma1 = 1.0 / tau_a;
    if (scheme == chi2qed::Scheme::TwoMode) {
        m.g = std::sqrt(2.0) * omega;
        m.gamma2 = 2.0 / tau_b;
    } else {
        m.g = alpha * omega;
        m.gamma2 = 1.0 / tau_b;
    }
    return m;
}

// --- evolve ------------------------------------------------------------------

struct EvolveArgs {
    std::string config, scheme = "two-mode", tau_a, tau_b, omega, alpha, detuning = "0";
    std::string t_final, dt_max = "0", stride = "0", rho11 = "1", rho22 = "0", imv = "0";
    std::string oracle, output = "-", format = "csv";
    int n_scheme = 0, n_tau_a = 0, n_tau_b = 0, n_omega = 0, n_alpha = 0, n_detuning = 0;
    int n_t_final = 0, n_dt_max = 0, n_stride = 0, n_rho11 = 0, n_rho22 = 0, n_imv = 0;
    int n_oracle = 0, n_output = 0, n_format = 0;
};

int run_evolve(const EvolveArgs& a)
{
    Params p;
    if (!a.config.empty())
        p.load_config(a.config);

    const std::string scheme_str = p.resolve("scheme", a.n_scheme, a.scheme, "two-mode");
    const chi2qed::Scheme scheme = parse_scheme(scheme_str);

    const std::string tau_a_str = p.resolve("tau_a", a.n_tau_a, a.tau_a, "");
    const std::string tau_b_str = p.resolve("tau_b", a.n_tau_b, a.tau_b, "");
    const std::string omega_str = p.resolve("omega", a.n_omega, a.omega, "");
    const std::string t_final_str = p.resolve("t_final", a.n_t_final, a.t_final, "");
    if (tau_a_str.empty() || tau_b_str.empty() || omega_str.empty() || t_final_str.empty())
        throw std::invalid_argument(
            "evolve needs --tau-a, --tau-b, --omega and --t-final (or config values)");

    const bool alpha_given = p.was_set("alpha", a.n_alpha);
    if (scheme == chi2qed::Scheme::TwoMode && alpha_given)
        throw std::invalid_argument("--alpha applies only to --scheme three-mode");
    if (scheme == chi2qed::Scheme::ThreeMode && !alpha_given)
        throw std::invalid_argument("--alpha is required for --scheme three-mode");
    const double alpha =
        alpha_given ? chi2qed::units::parse_plain(p.resolve("alpha", a.n_alpha, a.alpha, "0"),
                                                  "--alpha")
                    : 0.0;

    const double tau_a = chi2qed::units::parse_time(tau_a_str);
    const double tau_b = chi2qed::units::parse_time(tau_b_str);
    const double omega = chi2qed::units::parse_angular_frequency(omega_str);
    const double t_final = chi2qed::units::parse_time(t_final_str);
    const double detuning = chi2qed::units::parse_angular_frequency(
        p.resolve("detuning", a.n_detuning, a.detuning, "0"));
    const double dt_max =
        chi2qed::units::parse_time(p.resolve("dt_max", a.n_dt_max, a.dt_max, "0"));
    if (tau_a <= 0.0 || tau_b <= 0.0)
        throw std::invalid_argument("--tau-a and --tau-b must be positive");
    if (omega < 0.0)
        throw std::invalid_argument("--omega must be non-negative");

    chi2qed::SubsystemState initial;
    initial.rho11 =
        chi2qed::units::parse_plain(p.resolve("rho11", a.n_rho11, a.rho11, "1"), "--rho11");
    initial.rho22 =
        chi2qed::units::parse_plain(p.resolve("rho22", a.n_rho22, a.rho22, "0"), "--rho22");
    initial.im_v = chi2qed::units::parse_plain(p.resolve("imv", a.n_imv, a.imv, "0"), "--imv");

    const chi2qed::ReducedModel model =
        make_model(scheme, tau_a, tau_b, omega, alpha, detuning);

    std::int64_t stride = std::llround(
        chi2qed::units::parse_plain(p.resolve("stride", a.n_stride, a.stride, "0"), "--stride"));
    const std::string oracle = p.resolve("oracle", a.n_oracle, a.oracle, "");
    if (!oracle.empty() && oracle != "full-lindblad")
        throw std::invalid_argument("--oracle supports only 'full-lindblad'");

    // Shared step so subsystem and oracle samples line up.
    double dt_shared = chi2qed::suggested_step(model, t_final);
    std::unique_ptr<chi2qed::LindbladGenerator> gen;
    if (!oracle.empty()) {
        chi2qed::FockTruncation trunc{1, scheme == chi2qed::Scheme::TwoMode ? 2 : 1};
        gen = std::make_unique<chi2qed::LindbladGenerator>(scheme, omega, alpha, tau_a, tau_b,
                                                           detuning, trunc);
        dt_shared = std::min(dt_shared, gen->min_timescale(t_final) / 50.0);
    }
    if (dt_max > 0.0)
        dt_shared = std::min(dt_shared, dt_max);

    chi2qed::SimulationTrace trace;
    if (stride <= 0) {
        const std::int64_t n_steps = chi2qed::step_count(t_final, dt_shared);
        stride = std::max<std::int64_t>(1, n_steps / 4000);
    }
    trace = chi2qed::evolve_subsystem(model, initial, t_final, dt_shared, stride);

    chi2qed::LindbladTrace oracle_trace;
    if (gen) {
        chi2qed::DensityMatrix rho0 =
            chi2qed::DensityMatrix::fock_state(gen->truncation(), 0, 0);
        rho0.rho.setZero();
        // Mirror the subsystem initial condition exactly (populations in
        // |1>, |2> plus Im V; any remainder is left out on both sides).
        const int i1 = gen->truncation().index(1, 0);
        const int i2 = scheme == chi2qed::Scheme::TwoMode ? gen->truncation().index(0, 2)
                                                          : gen->truncation().index(0, 1);
        rho0.rho(i1, i1) = initial.rho11;
        rho0.rho(i2, i2) = initial.rho22;
        rho0.rho(i1, i2) = std::complex<double>(0.0, 0.5 * initial.im_v);
        rho0.rho(i2, i1) = std::conj(rho0.rho(i1, i2));
        oracle_trace = chi2qed::evolve_lindblad(*gen, rho0, scheme, t_final, dt_shared, stride);
    }

    p.note("resolved_dt", format_double(trace.metadata.dt));
    p.note("resolved_steps", std::to_string(trace.metadata.steps));

    Output out(p.resolve("output", a.n_output, a.output, "-"));
    const std::string format = p.resolve("format", a.n_format, a.format, "csv");
    if (format == "csv") {
        chi2qed::write_metadata_header(out.stream(), "evolve", p.resolved());
        if (!gen) {
            chi2qed::write_trace_csv(out.stream(), trace);
        } else {
            out.stream() << "t,rho11,rho22,rho33,rho44,imV,trace_total,"
                            "rho11_fock,rho22_fock,rho33_fock,rho44_fock,imV_fock\n";
            for (std::size_t i = 0; i < trace.times.size(); ++i) {
                const auto& s = trace.states[i];
                const auto& f = oracle_trace.states[i];
                out.stream() << format_double(trace.times[i]) << ',' << format_double(s.rho11)
                             << ',' << format_double(s.rho22) << ',' << format_double(s.rho33)
                             << ',' << format_double(s.rho44) << ',' << format_double(s.im_v)
                             << ',' << format_double(s.total_population()) << ','
                             << format_double(f.rho11) << ',' << format_double(f.rho22) << ','
                             << format_double(f.rho33) << ',' << format_double(f.rho44) << ','
                             << format_double(f.im_v) << "\n";
            }
        }
    } else if (format == "json") {
        json j = chi2qed::trace_to_json(trace);
        j["metadata"] = p.resolved();
        if (gen) {
            std::vector<double> r11, r22;
            for (const auto& s : oracle_trace.states) {
                r11.push_back(s.rho11);
                r22.push_back(s.rho22);
            }
            j["rho11_fock"] = r11;
            j["rho22_fock"] = r22;
        }
        out.stream() << j.dump(2) << "\n";
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }
    return 0;
}

// --- spectrum ----------------------------------------------------------------

struct SpectrumArgs {
    std::string config, scheme = "two-mode", omega_a, omega, alpha, tau_a, tau_b;
    std::string delta_min, delta_max, delta_steps = "201";
    std::string curve_at_delta, omega_min, omega_max, omega_steps = "501";
    std::string output = "-", format = "csv";
    int n_scheme = 0, n_omega_a = 0, n_omega = 0, n_alpha = 0, n_tau_a = 0, n_tau_b = 0;
    int n_delta_min = 0, n_delta_max = 0, n_delta_steps = 0;
    int n_curve = 0, n_omega_min = 0, n_omega_max = 0, n_omega_steps = 0;
    int n_output = 0, n_format = 0;
};

int run_spectrum(const SpectrumArgs& a)
{
    Params p;
    if (!a.config.empty())
        p.load_config(a.config);

    const chi2qed::Scheme scheme =
        parse_scheme(p.resolve("scheme", a.n_scheme, a.scheme, "two-mode"));
    const std::string omega_a_str = p.resolve("omega_a", a.n_omega_a, a.omega_a, "");
    const std::string omega_str = p.resolve("omega", a.n_omega, a.omega, "");
    const std::string tau_a_str = p.resolve("tau_a", a.n_tau_a, a.tau_a, "");
    const std::string tau_b_str = p.resolve("tau_b", a.n_tau_b, a.tau_b, "");
    if (omega_a_str.empty() || omega_str.empty() || tau_a_str.empty() || tau_b_str.empty())
        throw std::invalid_argument(
            "spectrum needs --omega-a, --omega, --tau-a and --tau-b (or config values)");

    const double omega_a = chi2qed::units::parse_angular_frequency(omega_a_str);
    const double omega = chi2qed::units::parse_angular_frequency(omega_str);
    const double tau_a = chi2qed::units::parse_time(tau_a_str);
    const double tau_b = chi2qed::units::parse_time(tau_b_str);

    const bool alpha_given = p.was_set("alpha", a.n_alpha);
    if (scheme == chi2qed::Scheme::TwoMode && alpha_given)
        throw std::invalid_argument("--alpha applies only to --scheme three-mode");
    if (scheme == chi2qed::Scheme::ThreeMode && !alpha_given)
        throw std::invalid_argument("--alpha is required for --scheme three-mode");
    const double alpha =
        alpha_given ? chi2qed::units::parse_plain(p.resolve("alpha", a.n_alpha, a.alpha, "0"),
                                                  "--alpha")
                    : 0.0;

    chi2qed::ReducedModel base = make_model(scheme, tau_a, tau_b, omega, alpha, 0.0);
    const double g = base.g;
    const double gamma_a = 1.0 / tau_a;
    const double gamma_b = 1.0 / tau_b;

    const double default_span = g > 0.0 ? 10.0 * 2.0 * g : 0.1 * omega_a;
    const double delta_min = chi2qed::units::parse_angular_frequency(
        p.resolve("delta_min", a.n_delta_min, a.delta_min, format_double(-default_span)));
    const double delta_max = chi2qed::units::parse_angular_frequency(
        p.resolve("delta_max", a.n_delta_max, a.delta_max, format_double(default_span)));
    const int delta_steps = static_cast<int>(chi2qed::units::parse_plain(
        p.resolve("delta_steps", a.n_delta_steps, a.delta_steps, "201"), "--delta-steps"));

    Output out(p.resolve("output", a.n_output, a.output, "-"));
    const std::string format = p.resolve("format", a.n_format, a.format, "csv");

    if (p.was_set("curve_at_delta", a.n_curve)) {
        // Sampled two-Lorentzian emission curve at one detuning.
        const double delta = chi2qed::units::parse_angular_frequency(
            p.resolve("curve_at_delta", a.n_curve, a.curve_at_delta, "0"));
        chi2qed::ReducedModel model = base;
        model.detuning = delta;
        chi2qed::DressedSpectrum ds;
        std::tie(ds.e_plus, ds.e_minus) = chi2qed::dressed_energies(omega_a, omega_a - delta, g);
        std::tie(ds.gamma_plus, ds.gamma_minus) =
            chi2qed::effective_linewidths(model, gamma_a, gamma_b);
        ds.omega_prime = chi2qed::generalized_rabi(g, delta);

        const double w_plus = ds.e_plus / chi2qed::constants::hbar;
        const double w_minus = ds.e_minus / chi2qed::constants::hbar;
        const double width = std::max(ds.gamma_plus, ds.gamma_minus);
        const double lo = chi2qed::units::parse_angular_frequency(p.resolve(
            "omega_min", a.n_omega_min, a.omega_min, format_double(w_minus - 5.0 * width)));
        const double hi = chi2qed::units::parse_angular_frequency(p.resolve(
            "omega_max", a.n_omega_max, a.omega_max, format_double(w_plus + 5.0 * width)));
        const int steps = static_cast<int>(chi2qed::units::parse_plain(
            p.resolve("omega_steps", a.n_omega_steps, a.omega_steps, "501"), "--omega-steps"));

        const auto curve =
            chi2qed::transmission_spectrum(ds, chi2qed::linspace(lo, hi, steps));
        if (format == "csv") {
            chi2qed::write_metadata_header(out.stream(), "spectrum", p.resolved());
            chi2qed::write_spectrum_csv(out.stream(), curve);
        } else if (format == "json") {
            json j;
            j["metadata"] = p.resolved();
            j["omega"] = curve.omega;
            j["S"] = curve.value;
            out.stream() << j.dump(2) << "\n";
        } else {
            throw std::invalid_argument("--format must be csv or json");
        }
        return 0;
    }

    std::vector<chi2qed::AvoidedCrossingRow> rows;
    for (double delta : chi2qed::linspace(delta_min, delta_max, delta_steps)) {
        const double omega_partner = omega_a - delta;
        if (omega_partner <= 0.0)
            throw std::domain_error("detuning sweep reaches non-positive partner frequency");
        chi2qed::ReducedModel model = base;
        model.detuning = delta;
        auto [e_plus, e_minus] = chi2qed::dressed_energies(omega_a, omega_partner, g);
        auto [gamma_plus, gamma_minus] =
            chi2qed::effective_linewidths(model, gamma_a, gamma_b);
        rows.push_back({delta, e_plus / chi2qed::constants::hbar,
                        e_minus / chi2qed::constants::hbar, gamma_plus, gamma_minus});
    }

    if (format == "csv") {
        chi2qed::write_metadata_header(out.stream(), "spectrum", p.resolved());
        chi2qed::write_avoided_crossing_csv(out.stream(), rows);
    } else if (format == "json") {
        json j;
        j["metadata"] = p.resolved();
        for (const auto& r : rows) {
            j["delta"].push_back(r.delta);
            j["e_plus_over_hbar"].push_back(r.e_plus);
            j["e_minus_over_hbar"].push_back(r.e_minus);
            j["gamma_plus"].push_back(r.gamma_plus);
            j["gamma_minus"].push_back(r.gamma_minus);
        }
        out.stream() << j.dump(2) << "\n";
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }
    return 0;
}

// --- feasibility ---------------------------------------------------------

struct FeasibilityArgs {
    std::string config, platform, assumptions = "paper-default", output = "-", format = "text";
    int n_platform = 0, n_assumptions = 0, n_output = 0, n_format = 0;
};

int run_feasibility(const FeasibilityArgs& a)
{
    Params p;
    if (!a.config.empty())
        p.load_config(a.config);

    const std::string platform = p.resolve("platform", a.n_platform, a.platform, "");
    if (platform.empty())
        throw std::invalid_argument("feasibility needs --platform (pcdmc, micropillar, "
                                    "microdisk or all)");
    const std::string assumptions =
        p.resolve("assumptions", a.n_assumptions, a.assumptions, "paper-default");
    if (assumptions != "paper-default")
        throw std::invalid_argument("unknown assumption set '" + assumptions +
                                    "' (only paper-default ships)");

    std::vector<chi2qed::PlatformPreset> presets;
    if (platform == "all")
        presets = {chi2qed::pcdmc_preset(), chi2qed::micropillar_preset(),
                   chi2qed::microdisk_preset()};
    else
        presets = {chi2qed::platform_preset(chi2qed::platform_from_name(platform))};

    std::vector<chi2qed::FeasibilityReport> reports;
    for (const auto& preset : presets)
        reports.push_back(chi2qed::platform_report(preset));

    Output out(p.resolve("output", a.n_output, a.output, "-"));
    const std::string format = p.resolve("format", a.n_format, a.format, "text");
    if (format == "text") {
        chi2qed::write_metadata_header(out.stream(), "feasibility", p.resolved());
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i > 0)
                out.stream() << "\n";
            chi2qed::write_report_text(out.stream(), reports[i]);
        }
    } else if (format == "json") {
        json j;
        j["metadata"] = p.resolved();
        if (reports.size() == 1) {
            j["report"] = chi2qed::report_to_json(reports[0]);
        } else {
            for (const auto& r : reports)
                j["reports"].push_back(chi2qed::report_to_json(r));
        }
        out.stream() << j.dump(2) << "\n";
    } else {
        throw std::invalid_argument("--format must be text or json");
    }
    return 0;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::string config, platform;
    std::string n = "1", fc = "1", q, delta = "0";
    std::string sweep_n, sweep_fc, sweep_q, sweep_delta;
    std::string jobs = "1", output = "-";
    int n_platform = 0, n_n = 0, n_fc = 0, n_q = 0, n_delta = 0;
    int n_sweep_n = 0, n_sweep_fc = 0, n_sweep_q = 0, n_sweep_delta = 0;
    int n_jobs = 0, n_output = 0;
};

struct SweepRow {
    double n, fc, q, delta;
    double g_eff, omega_prime, time_margin, spectral_margin;
    bool oscillatory;
    double two_omega_r;
};

int run_sweep(const SweepArgs& a)
{
    Params p;
    if (!a.config.empty())
        p.load_config(a.config);

    const std::string platform = p.resolve("platform", a.n_platform, a.platform, "");
    if (platform.empty())
        throw std::invalid_argument("sweep needs --platform");
    const chi2qed::PlatformPreset preset =
        chi2qed::platform_preset(chi2qed::platform_from_name(platform));
    const chi2qed::FeasibilityReport base = chi2qed::platform_report(preset);

    auto axis = [&](const char* key, int count, const std::string& sweep_value,
                    const char* fixed_key, int fixed_count, const std::string& fixed_value,
                    const std::string& fixed_default) {
        if (p.was_set(key, count))
            return parse_axis(p.resolve(key, count, sweep_value, ""), key);
        return std::vector<double>{chi2qed::units::parse_plain(
            p.resolve(fixed_key, fixed_count, fixed_value, fixed_default), fixed_key)};
    };

    const std::vector<double> ns =
        axis("sweep_n", a.n_sweep_n, a.sweep_n, "n", a.n_n, a.n, "1");
    const std::vector<double> fcs =
        axis("sweep_fc", a.n_sweep_fc, a.sweep_fc, "fc", a.n_fc, a.fc, "1");
    const std::vector<double> qs =
        axis("sweep_q", a.n_sweep_q, a.sweep_q, "q", a.n_q, a.q,
             format_double(preset.quality_factor));
    std::vector<double> deltas;
    if (p.was_set("sweep_delta", a.n_sweep_delta)) {
        deltas = parse_axis(p.resolve("sweep_delta", a.n_sweep_delta, a.sweep_delta, ""),
                            "sweep_delta");
    } else {
        deltas = {chi2qed::units::parse_angular_frequency(
            p.resolve("delta", a.n_delta, a.delta, "0"))};
    }

    const double total = static_cast<double>(ns.size()) * fcs.size() * qs.size() * deltas.size();
    if (total > 1e7)
        throw chi2qed::ResourceError("sweep grid exceeds 1e7 points");

    const long jobs = std::lround(
        chi2qed::units::parse_plain(p.resolve("jobs", a.n_jobs, a.jobs, "1"), "--jobs"));
    if (jobs < 1)
        throw std::invalid_argument("--jobs must be >= 1");

    const double lambda_b = preset.reference_wavelength;
    const double lambda_a = 0.5 * lambda_b;

    const std::size_t count = static_cast<std::size_t>(total);
    std::vector<SweepRow> rows(count);
    auto compute_row = [&](std::size_t flat) {
        std::size_t rest = flat;
        const std::size_t i_delta = rest % deltas.size();
        rest /= deltas.size();
        const std::size_t i_q = rest % qs.size();
        rest /= qs.size();
        const std::size_t i_fc = rest % fcs.size();
        rest /= fcs.size();
        const std::size_t i_n = rest;

        SweepRow row{};
        row.n = ns[i_n];
        row.fc = fcs[i_fc];
        row.q = qs[i_q];
        row.delta = deltas[i_delta];
        if (row.n <= 0.0 || row.fc <= 0.0 || row.q <= 0.0)
            throw std::domain_error("sweep values for n, f_c, q must be positive");

        const double tau_a = chi2qed::lifetime_from_q(row.q, lambda_a);
        const double tau_b = chi2qed::lifetime_from_q(row.q, lambda_b);
        chi2qed::ReducedModel model;
        model.scheme = chi2qed::Scheme::ThreeMode;
        model.g = std::sqrt(row.n / row.fc) * base.omega_single;
        model.gamma1 = 1.0 / tau_a;
        model.gamma2 = 1.0 / tau_b;
        model.detuning = row.delta;

        row.g_eff = model.g;
        row.omega_prime = chi2qed::generalized_rabi(model.g, row.delta);
        const double tau_eff = model.tau_eff();
        row.time_margin =
            chi2qed::seeded_time_margin(base.omega_single, tau_eff, row.n, row.fc);
        row.spectral_margin = chi2qed::constants::pi * row.time_margin;
        const auto rabi = chi2qed::damped_rabi_frequency(model);
        row.oscillatory = rabi.has_value();
        row.two_omega_r = rabi.value_or(0.0);
        rows[flat] = row;
    };

    if (jobs == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            compute_row(i);
    } else {
        std::vector<std::thread> workers;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        const std::size_t n_workers = std::min<std::size_t>(jobs, count);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += n_workers)
                        compute_row(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            });
        }
        for (auto& t : workers)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    Output out(p.resolve("output", a.n_output, a.output, "-"));
    chi2qed::write_metadata_header(out.stream(), "sweep", p.resolved());
    out.stream() << "n,f_c,q,delta,g_eff,omega_prime,time_margin,spectral_margin,"
                    "oscillatory,two_omega_r\n";
    for (const auto& r : rows) {
        out.stream() << format_double(r.n) << ',' << format_double(r.fc) << ','
                     << format_double(r.q) << ',' << format_double(r.delta) << ','
                     << format_double(r.g_eff) << ',' << format_double(r.omega_prime) << ','
                     << format_double(r.time_margin) << ',' << format_double(r.spectral_margin)
                     << ',' << (r.oscillatory ? 1 : 0) << ','
                     << (r.oscillatory ? format_double(r.two_omega_r) : std::string()) << "\n";
    }
    return 0;
}

// --- coupling utilities ----------------------------------------------------

struct CouplingContractArgs {
    std::string chi2 = "1", e1, e2, e3;
    bool normalize = false;
};

int run_coupling_contract(const CouplingContractArgs& a)
{
    const double chi = chi2qed::units::parse_chi2(a.chi2);
    Eigen::Vector3d e1 = parse_vector3(a.e1, "--e1");
    Eigen::Vector3d e2 = parse_vector3(a.e2, "--e2");
    Eigen::Vector3d e3 = parse_vector3(a.e3, "--e3");
    if (a.normalize) {
        e1.normalize();
        e2.normalize();
        e3.normalize();
    }
    const auto tensor = chi2qed::Chi2Tensor::zincblende(chi);
    const double value = chi2qed::contract_polarizations(tensor, e1, e2, e3);
    std::cout << "contraction = " << format_double(value) << " m/V\n";
    return 0;
}

struct CouplingOverlapArgs {
    std::string field_a, field_b, field_c, chi2 = "1";
    bool align_111 = false;
    bool normalize_fields = false;
};

int run_coupling_overlap(const CouplingOverlapArgs& a)
{
    auto load = [&](const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open field file: " + path);
        chi2qed::FieldGrid g = chi2qed::load_field_grid(in, !a.normalize_fields);
        if (a.normalize_fields)
            g.normalize();
        return g;
    };
    const chi2qed::FieldGrid fa = load(a.field_a);
    const chi2qed::FieldGrid fb = load(a.field_b);
    const chi2qed::FieldGrid fc = load(a.field_c);

    chi2qed::Chi2Tensor tensor =
        chi2qed::Chi2Tensor::zincblende(chi2qed::units::parse_chi2(a.chi2));
    if (a.align_111) {
        const Eigen::Matrix3d r = chi2qed::rotation_aligning(
            Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(0, 0, 1));
        tensor = chi2qed::rotate_tensor(tensor, r);
    }
    const std::complex<double> overlap = chi2qed::overlap_integral(tensor, fa, fb, fc);
    std::cout << "overlap_re = " << format_double(overlap.real()) << "\n";
    std::cout << "overlap_im = " << format_double(overlap.imag()) << "\n";
    std::cout << "overlap_abs = " << format_double(std::abs(overlap)) << "\n";
    return 0;
}

struct CouplingConstantArgs {
    std::string scheme = "three-mode";
    std::string lambda_a, lambda_b, lambda_c;
    std::string n_a = "3.4", n_b = "3.4", n_c = "3.4";
    std::string v_a, v_b, v_c;
    std::string overlap_re, overlap_im = "0";
    std::string alpha = "1";
};

int run_coupling_constant(const CouplingConstantArgs& a)
{
    const chi2qed::Scheme scheme = parse_scheme(a.scheme);
    auto mode = [](const std::string& lambda, const std::string& n, const std::string& v,
                   const char* which) {
        if (lambda.empty() || v.empty())
            throw std::invalid_argument(std::string("coupling constant: missing --lambda-") +
                                        which + " or --v-" + which);
        return chi2qed::CavityMode(chi2qed::units::parse_length(lambda),
                                   1.0e4,  // Q is irrelevant to the prefactor
                                   chi2qed::units::parse_plain(n, "refractive index"),
                                   chi2qed::units::parse_plain(v, "mode volume"));
    };
    const chi2qed::CavityMode mode_a = mode(a.lambda_a, a.n_a, a.v_a, "a");
    const chi2qed::CavityMode mode_b = mode(a.lambda_b, a.n_b, a.v_b, "b");
    const std::complex<double> overlap(
        chi2qed::units::parse_plain(a.overlap_re, "--overlap-re"),
        chi2qed::units::parse_plain(a.overlap_im, "--overlap-im"));

    double omega = 0.0;
    if (scheme == chi2qed::Scheme::TwoMode) {
        omega = chi2qed::coupling_constant(
            chi2qed::CoupledSystem::two_mode(mode_a, mode_b, 0.0), overlap);
    } else {
        const chi2qed::CavityMode mode_c = mode(a.lambda_c, a.n_c, a.v_c, "c");
        omega = chi2qed::coupling_constant(
            chi2qed::CoupledSystem::three_mode(
                mode_a, mode_b, mode_c, 0.0,
                chi2qed::units::parse_plain(a.alpha, "--alpha")),
            overlap);
    }
    std::cout << "omega = " << format_double(omega) << " rad/s\n";
    std::cout << "half_period = " << format_double(chi2qed::constants::pi / omega) << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"chi2qed: single-photon strong coupling in chi2 microcavities"};
    app.require_subcommand(1);

    EvolveArgs ev;
    CLI::App* evolve = app.add_subcommand("evolve", "integrate the damped Rabi subsystem");
    evolve->add_option("--config", ev.config, "JSON config file (flags override)");
    evolve->add_option("--scheme", ev.scheme, "two-mode | three-mode");
    evolve->add_option("--tau-a", ev.tau_a, "mode-a lifetime (time suffix ok)");
    evolve->add_option("--tau-b", ev.tau_b, "mode-b lifetime");
    evolve->add_option("--omega", ev.omega, "bare coupling Omega (rad/s; Hz suffixes ok)");
    evolve->add_option("--alpha", ev.alpha, "coherent seed |alpha| (three-mode)");
    evolve->add_option("--detuning", ev.detuning, "detuning Delta (rad/s)");
    evolve->add_option("--rho11", ev.rho11, "initial rho11");
    evolve->add_option("--rho22", ev.rho22, "initial rho22");
    evolve->add_option("--imv", ev.imv, "initial Im V");
    evolve->add_option("--t-final", ev.t_final, "integration time");
    evolve->add_option("--dt-max", ev.dt_max, "upper bound on the RK4 step");
    evolve->add_option("--stride", ev.stride, "output every N-th step (0 = auto)");
    evolve->add_option("--oracle", ev.oracle, "'full-lindblad' adds master-equation columns");
    evolve->add_option("--output,-o", ev.output, "output path ('-' = stdout)");
    evolve->add_option("--format", ev.format, "csv | json");

    SpectrumArgs sp;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "dressed-state branches and emission curves");
    spectrum->add_option("--config", sp.config, "JSON config file (flags override)");
    spectrum->add_option("--scheme", sp.scheme, "two-mode | three-mode");
    spectrum->add_option("--omega-a", sp.omega_a, "fixed mode-a frequency (rad/s)");
    spectrum->add_option("--omega", sp.omega, "bare coupling Omega");
    spectrum->add_option("--alpha", sp.alpha, "coherent seed |alpha| (three-mode)");
    spectrum->add_option("--tau-a", sp.tau_a, "mode-a lifetime");
    spectrum->add_option("--tau-b", sp.tau_b, "mode-b lifetime");
    spectrum->add_option("--delta-min", sp.delta_min, "sweep start (rad/s)");
    spectrum->add_option("--delta-max", sp.delta_max, "sweep end (rad/s)");
    spectrum->add_option("--delta-steps", sp.delta_steps, "sweep samples");
    spectrum->add_option("--curve-at-delta", sp.curve_at_delta,
                         "emit S(omega) at this detuning instead of the sweep");
    spectrum->add_option("--omega-min", sp.omega_min, "curve range start");
    spectrum->add_option("--omega-max", sp.omega_max, "curve range end");
    spectrum->add_option("--omega-steps", sp.omega_steps, "curve samples");
    spectrum->add_option("--output,-o", sp.output, "output path");
    spectrum->add_option("--format", sp.format, "csv | json");

    FeasibilityArgs fe;
    CLI::App* feasibility =
        app.add_subcommand("feasibility", "platform estimates and criteria");
    feasibility->add_option("--config", fe.config, "JSON config file (flags override)");
    feasibility->add_option("--platform", fe.platform, "pcdmc | micropillar | microdisk | all");
    feasibility->add_option("--assumptions", fe.assumptions, "assumption set name");
    feasibility->add_option("--output,-o", fe.output, "output path");
    feasibility->add_option("--format", fe.format, "text | json");

    SweepArgs sw;
    CLI::App* sweep = app.add_subcommand("sweep", "criteria margins over a parameter grid");
    sweep->add_option("--config", sw.config, "JSON config file (flags override)");
    sweep->add_option("--platform", sw.platform, "base platform preset");
    sweep->add_option("--n", sw.n, "photon number in mode c");
    sweep->add_option("--fc", sw.fc, "V_c / V_a");
    sweep->add_option("--q", sw.q, "quality factor override");
    sweep->add_option("--delta", sw.delta, "detuning (rad/s)");
    sweep->add_option("--sweep-n", sw.sweep_n, "axis start:stop:count[:log|lin]");
    sweep->add_option("--sweep-fc", sw.sweep_fc, "axis start:stop:count[:log|lin]");
    sweep->add_option("--sweep-q", sw.sweep_q, "axis start:stop:count[:log|lin]");
    sweep->add_option("--sweep-delta", sw.sweep_delta, "axis start:stop:count[:log|lin]");
    sweep->add_option("--jobs", sw.jobs, "worker threads (output order is fixed)");
    sweep->add_option("--output,-o", sw.output, "output path");

    CLI::App* coupling =
        app.add_subcommand("coupling", "overlap and tensor-contraction utilities");
    coupling->require_subcommand(1);

    CouplingContractArgs cc;
    CLI::App* contract = coupling->add_subcommand("contract", "contract polarizations");
    contract->add_option("--chi2", cc.chi2, "|chi2| (m/V or pm/V)");
    contract->add_option("--e1", cc.e1, "x,y,z")->required();
    contract->add_option("--e2", cc.e2, "x,y,z")->required();
    contract->add_option("--e3", cc.e3, "x,y,z")->required();
    contract->add_flag("--normalize", cc.normalize, "normalize inputs first");

    CouplingOverlapArgs co;
    CLI::App* overlap = coupling->add_subcommand("overlap", "overlap integral of field files");
    overlap->add_option("--field-a", co.field_a, "field grid file")->required();
    overlap->add_option("--field-b", co.field_b, "field grid file")->required();
    overlap->add_option("--field-c", co.field_c, "field grid file")->required();
    overlap->add_option("--chi2", co.chi2, "|chi2| (m/V or pm/V)");
    overlap->add_flag("--align-111", co.align_111, "rotate the crystal so (111) -> z");
    overlap->add_flag("--normalize-fields", co.normalize_fields,
                      "renormalize loaded fields to unit maximum");

    CouplingConstantArgs ck;
    CLI::App* constant = coupling->add_subcommand("constant", "Omega from a given overlap");
    constant->add_option("--scheme", ck.scheme, "two-mode | three-mode");
    constant->add_option("--lambda-a", ck.lambda_a, "mode-a wavelength");
    constant->add_option("--lambda-b", ck.lambda_b, "mode-b wavelength");
    constant->add_option("--lambda-c", ck.lambda_c, "mode-c wavelength");
    constant->add_option("--n-a", ck.n_a, "refractive index of mode a");
    constant->add_option("--n-b", ck.n_b, "refractive index of mode b");
    constant->add_option("--n-c", ck.n_c, "refractive index of mode c");
    constant->add_option("--v-a", ck.v_a, "mode volume a (m^3)");
    constant->add_option("--v-b", ck.v_b, "mode volume b (m^3)");
    constant->add_option("--v-c", ck.v_c, "mode volume c (m^3)");
    constant->add_option("--overlap-re", ck.overlap_re, "overlap integral, real part")
        ->required();
    constant->add_option("--overlap-im", ck.overlap_im, "overlap integral, imaginary part");
    constant->add_option("--alpha", ck.alpha, "coherent seed |alpha| (three-mode)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // Count how often each flag appeared so config-file values can be
        // overridden precisely.
        auto count = [](CLI::App* cmd, const char* name) {
            return static_cast<int>(cmd->count(name));
        };
        if (evolve->parsed()) {
            ev.n_scheme = count(evolve, "--scheme");
            ev.n_tau_a = count(evolve, "--tau-a");
            ev.n_tau_b = count(evolve, "--tau-b");
            ev.n_omega = count(evolve, "--omega");
            ev.n_alpha = count(evolve, "--alpha");
            ev.n_detuning = count(evolve, "--detuning");
            ev.n_t_final = count(evolve, "--t-final");
            ev.n_dt_max = count(evolve, "--dt-max");
            ev.n_stride = count(evolve, "--stride");
            ev.n_rho11 = count(evolve, "--rho11");
            ev.n_rho22 = count(evolve, "--rho22");
            ev.n_imv = count(evolve, "--imv");
            ev.n_oracle = count(evolve, "--oracle");
            ev.n_output = count(evolve, "--output");
            ev.n_format = count(evolve, "--format");
            return run_evolve(ev);
        }
        if (spectrum->parsed()) {
            sp.n_scheme = count(spectrum, "--scheme");
            sp.n_omega_a = count(spectrum, "--omega-a");
            sp.n_omega = count(spectrum, "--omega");
            sp.n_alpha = count(spectrum, "--alpha");
            sp.n_tau_a = count(spectrum, "--tau-a");
            sp.n_tau_b = count(spectrum, "--tau-b");
            sp.n_delta_min = count(spectrum, "--delta-min");
            sp.n_delta_max = count(spectrum, "--delta-max");
            sp.n_delta_steps = count(spectrum, "--delta-steps");
            sp.n_curve = count(spectrum, "--curve-at-delta");
            sp.n_omega_min = count(spectrum, "--omega-min");
            sp.n_omega_max = count(spectrum, "--omega-max");
            sp.n_omega_steps = count(spectrum, "--omega-steps");
            sp.n_output = count(spectrum, "--output");
            sp.n_format = count(spectrum, "--format");
            return run_spectrum(sp);
        }
        if (feasibility->parsed()) {
            fe.n_platform = count(feasibility, "--platform");
            fe.n_assumptions = count(feasibility, "--assumptions");
            fe.n_output = count(feasibility, "--output");
            fe.n_format = count(feasibility, "--format");
            return run_feasibility(fe);
        }
        if (sweep->parsed()) {
            sw.n_platform = count(sweep, "--platform");
            sw.n_n = count(sweep, "--n");
            sw.n_fc = count(sweep, "--fc");
            sw.n_q = count(sweep, "--q");
            sw.n_delta = count(sweep, "--delta");
            sw.n_sweep_n = count(sweep, "--sweep-n");
            sw.n_sweep_fc = count(sweep, "--sweep-fc");
            sw.n_sweep_q = count(sweep, "--sweep-q");
            sw.n_sweep_delta = count(sweep, "--sweep-delta");
            sw.n_jobs = count(sweep, "--jobs");
            sw.n_output = count(sweep, "--output");
            return run_sweep(sw);
        }
        if (coupling->parsed()) {
            if (contract->parsed())
                return run_coupling_contract(cc);
            if (overlap->parsed())
                return run_coupling_overlap(co);
            if (constant->parsed())
                return run_coupling_constant(ck);
        }
        throw std::invalid_argument("no subcommand given");
    } catch (const chi2qed::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
