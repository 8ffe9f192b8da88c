// geophase — command-line front end for the geometric-phase laboratory

#include "geophase/eigensystem.hpp"
#include "geophase/errors.hpp"
#include "geophase/phases.hpp"
#include "geophase/plot.hpp"
#include "geophase/scenario.hpp"
#include "geophase/subsystem.hpp"
#include "geophase/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace geophase;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct ModelFlags {
    std::string config;
    std::optional<double> omega1, nu, lambda, coupling_J, omega2, theta;
    std::optional<int> n_photon, n_prime, loop_steps;
    std::vector<int> levels;

    void attach(CLI::App* cmd, bool with_theta, bool with_loop) {
        cmd->add_option("--config", config, "JSON config (flags override its values)");
        cmd->add_option("--omega1", omega1, "transition frequency of particle 1");
        cmd->add_option("--nu", nu, "field-mode frequency");
        cmd->add_option("--lambda", lambda, "spin-field coupling");
        cmd->add_option("--coupling-J,--J", coupling_J, "spin-spin coupling");
        cmd->add_option("--omega2", omega2, "Zeeman energy mu*B of particle 2");
        cmd->add_option("--n-photon,--n", n_photon, "photon number of the invariant subspace");
        cmd->add_option("--n-prime", n_prime, "second-mode photon number");
        cmd->add_option("--level", levels, "levels 1..4 (repeatable; default all)");
        if (with_theta) cmd->add_option("--theta", theta, "polar angle of the two-mode loop");
        if (with_loop) cmd->add_option("--loop-steps", loop_steps, "loop discretisation");
    }

    // Config file first, then explicit flags.
    SweepSpec resolve() const {
        SweepSpec spec;
        spec.loop_steps = kDefaultLoopSteps;
        if (!config.empty()) {
            std::ifstream in(config);
            if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config " + config);
            nlohmann::json doc;
            try {
                in >> doc;
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
            }
            spec = sweep_spec_from_json(doc);
        }
        if (omega1) spec.base.omega1 = *omega1;
        if (nu) spec.base.nu = *nu;
        if (lambda) spec.base.lambda = *lambda;
        if (coupling_J) spec.base.coupling_J = *coupling_J;
        if (omega2) spec.base.omega2 = *omega2;
        if (n_photon) spec.base.n_photon = *n_photon;
        if (n_prime) spec.base.n_prime = *n_prime;
        if (theta) spec.theta = *theta;
        if (loop_steps) spec.loop_steps = *loop_steps;
        if (!levels.empty()) spec.levels = levels;
        spec.base.validate();
        for (int j : spec.levels) {
            if (j < 1 || j > 4) throw Error(ErrorKind::InvalidInput, "levels must be in 1..4");
        }
        if (spec.loop_steps < 16) throw Error(ErrorKind::InvalidInput, "loop steps must be >= 16");
        return spec;
    }
};

std::string num(double v) { return format_double(v); }

void print_params(const SweepSpec& s) {
    const ModelParams& p = s.base;
    std::cout << "# omega1=" << num(p.omega1) << " nu=" << num(p.nu) << " lambda=" << num(p.lambda)
              << " J=" << num(p.coupling_J) << " omega2=" << num(p.omega2) << " n=" << p.n_photon
              << " n'=" << p.n_prime << '\n';
}

void print_phase_header() {
    std::cout << "level,numeric,analytic,difference_mod_2pi,loop_steps,converged\n";
}

void print_phase(int level, const PhaseReport& r) {
    std::cout << level << ',' << num(r.numeric_phase) << ',' << num(r.analytic_phase) << ','
              << num(r.difference_mod_2pi) << ',' << r.loop_steps << ',' << (r.converged ? 1 : 0)
              << '\n';
}

int cmd_eig(const ModelFlags& flags, double phi) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    const auto frames = eigenframes(s.base, phi);
    std::cout << "level,energy,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_c4,im_c4,chi,xi,eta,"
                 "concurrence,photon_number\n";
    for (int j : s.levels) {
        const EigenFrame& f = frames[j - 1];
        std::cout << j << ',' << num(f.energy);
        for (int k = 0; k < 4; ++k) {
            std::cout << ',' << num(f.amplitudes(k).real()) << ',' << num(f.amplitudes(k).imag());
        }
        std::cout << ',' << num(f.chi) << ',' << num(f.xi) << ',' << num(f.eta) << ','
                  << num(concurrence_pure(f)) << ',' << num(number_expectation(s.base, f.amplitudes))
                  << '\n';
    }
    return 0;
}

int cmd_berry_magnetic(const ModelFlags& flags) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    std::cout << "# azimuth loop phi: 0 -> 2pi; analytic = solid-angle combination\n";
    const auto reports = berry_magnetic_all_levels(s.base, s.loop_steps);
    print_phase_header();
    for (int j : s.levels) print_phase(j, reports[j - 1]);
    return 0;
}

int cmd_berry_quantized(const ModelFlags& flags) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    std::cout << "# phase-shift loop exp(-i phi a'a); analytic = pi(1 - cos chi) + 2 pi n\n";
    print_phase_header();
    for (int j : s.levels) print_phase(j, berry_quantized_numeric(s.base, j, s.loop_steps));
    return 0;
}

int cmd_berry_twomode(const ModelFlags& flags) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    std::cout << "# two-mode loop at theta=" << num(s.theta)
              << "; numeric uses U = exp(-i phi Jz) exp(-i theta Jy) and integrates to "
                 "2 pi cos(theta) <Jz>;\n# analytic = -(1/2) Omega [(n - n') + sin^2(chi/2)], "
                 "Omega = 2 pi (1 - cos theta); the difference is reported, not asserted\n";
    std::cout << "level,numeric,analytic,difference_mod_2pi,loop_steps,converged,"
                 "two_pi_cos_theta_jz,two_pi_jz\n";
    const auto frames = eigenframes(s.base, 0.0);
    for (int j : s.levels) {
        const PhaseReport r = two_mode_berry_numeric(s.base, j, s.theta, s.loop_steps);
        const double jz = embed_two_mode(frames[j - 1].amplitudes, s.base).jz_expectation();
        std::cout << j << ',' << num(r.numeric_phase) << ',' << num(r.analytic_phase) << ','
                  << num(r.difference_mod_2pi) << ',' << r.loop_steps << ',' << (r.converged ? 1 : 0)
                  << ',' << num(2 * std::numbers::pi * std::cos(s.theta) * jz) << ','
                  << num(2 * std::numbers::pi * jz) << '\n';
    }
    return 0;
}

int cmd_mixed_phase(const ModelFlags& flags, const std::string& partition, bool two_mode) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    Partition keep;
    if (partition == "particle2") keep = Partition::Particle2;
    else if (partition == "particle1-fields") keep = Partition::Particle1Fields;
    else throw Error(ErrorKind::InvalidInput, "partition must be particle2 or particle1-fields");
    if (two_mode && keep != Partition::Particle1Fields) {
        throw Error(ErrorKind::InvalidInput, "the two-mode loop keeps particle1-fields");
    }

    std::cout << "level,numeric,analytic,difference_mod_2pi,loop_steps,weights,berry_phases\n";
    std::array<LoopTrace, 4> traces;
    if (!two_mode) traces = track_all_levels(s.base, s.loop_steps);
    for (int j : s.levels) {
        const MixedPhaseReport r = two_mode ? mixed_phase_two_mode_numeric(s.base, j, s.theta, s.loop_steps)
                                            : mixed_phase_numeric(traces[j - 1], keep);
        std::cout << j << ',' << num(r.numeric_phase) << ',' << num(r.analytic_phase) << ','
                  << num(r.difference_mod_2pi) << ',' << r.loop_steps << ',';
        for (std::size_t l = 0; l < r.weights.size(); ++l) std::cout << (l ? ";" : "") << num(r.weights[l]);
        std::cout << ',';
        for (std::size_t l = 0; l < r.berry_phases.size(); ++l) {
            std::cout << (l ? ";" : "") << num(r.berry_phases[l]);
        }
        std::cout << '\n';
    }
    return 0;
}

int cmd_concurrence(const ModelFlags& flags) {
    const SweepSpec s = flags.resolve();
    print_params(s);
    const auto frames = eigenframes(s.base, 0.0);
    std::cout << "level,concurrence,angle_form\n";
    for (int j : s.levels) {
        const EigenFrame& f = frames[j - 1];
        std::cout << j << ',' << num(concurrence_pure(f)) << ','
                  << num(concurrence_from_angles(f.chi, f.xi, f.eta)) << '\n';
    }
    return 0;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    ss.imbue(std::locale::classic());
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        is.imbue(std::locale::classic());
        double v;
        if (!(is >> v) || !(is >> std::ws).eof()) {
            throw Error(ErrorKind::InvalidInput, "bad value '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_range(const std::string& text) {
    const auto parts = parse_values([&] {
        std::string t = text;
        for (char& c : t) if (c == ':') c = ',';
        return t;
    }());
    if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "range is start:stop:step");
    return linear_range(parts[0], parts[1], parts[2]);
}

int cmd_sweep(const ModelFlags& flags, const std::optional<std::string>& axis,
              const std::string& values, const std::string& range,
              const std::vector<std::string>& outputs, const std::optional<int>& workers,
              const std::string& out) {
    SweepSpec s = flags.resolve();
    if (axis) s.axis = *axis;
    if (!values.empty() && !range.empty()) {
        throw Error(ErrorKind::InvalidInput, "give --values or --range, not both");
    }
    if (!values.empty()) s.values = parse_values(values);
    if (!range.empty()) s.values = parse_range(range);
    if (!outputs.empty()) {
        s.outputs.clear();
        for (const auto& o : outputs) {
            if (o == "all") {
                s.outputs = all_quantities();
            } else {
                s.outputs.insert(quantity_from_string(o));
            }
        }
    }
    if (workers) s.workers = *workers;
    const auto rows = run_sweep(s);
    if (out.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream f(out, std::ios::binary);
        write_csv(f, rows);
        if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + out);
        std::cerr << "wrote " << rows.size() << " rows to " << out << '\n';
    }
    return 0;
}

int cmd_scenario(const std::string& name, const std::string& out, const ScenarioOptions& options) {
    std::vector<std::string> names;
    if (name == "all") names = scenario_names();
    else names.push_back(name);
    bool all_passed = true;
    for (const auto& n : names) {
        const ScenarioResult result = run_scenario(n, options);
        write_report(std::cout, result);
        save_scenario(out, result);
        all_passed = all_passed && result.passed();
    }
    return all_passed ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric phases of two coupled spins in a classical field and a quantized mode"};
    app.require_subcommand(1);

    ModelFlags eig_flags, mag_flags, q_flags, tm_flags, mix_flags, conc_flags, sweep_flags;
    double eig_phi = 0.0;
    auto* eig = app.add_subcommand("eig", "eigenpairs and angles of the invariant block");
    eig_flags.attach(eig, false, false);
    eig->add_option("--phi", eig_phi, "field azimuth");

    auto* mag = app.add_subcommand("berry-magnetic", "Berry phase of the field-azimuth loop");
    mag_flags.attach(mag, false, true);
    auto* q = app.add_subcommand("berry-quantized", "Berry phase of the phase-shift loop");
    q_flags.attach(q, false, true);
    auto* tm = app.add_subcommand("berry-twomode", "Berry phase of the two-mode SU(2) loop");
    tm_flags.attach(tm, true, true);

    std::string partition;  // default depends on --two-mode
    bool two_mode = false;
    auto* mix = app.add_subcommand("mixed-phase", "mixed-state geometric phase of a subsystem");
    mix_flags.attach(mix, true, true);
    mix->add_option("--partition", partition, "particle2 | particle1-fields");
    mix->add_flag("--two-mode", two_mode, "use the two-mode loop (keeps particle1-fields)");

    auto* conc = app.add_subcommand("concurrence", "concurrence of the eigenstates");
    conc_flags.attach(conc, false, false);

    std::optional<std::string> axis;
    std::string values, range, sweep_out;
    std::vector<std::string> outputs;
    std::optional<int> workers;
    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    sweep_flags.attach(sweep, true, true);
    sweep->add_option("--axis", axis, "omega1|nu|lambda|coupling_J|omega2|n_photon|n_prime|theta");
    sweep->add_option("--values", values, "comma-separated axis values");
    sweep->add_option("--range", range, "start:stop:step (inclusive)");
    sweep->add_option("--outputs", outputs,
                      "magnetic|quantized|twomode|mixed2|mixed2q|concurrence|all (repeatable)");
    sweep->add_option("--workers", workers, "parallel workers");
    sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

    std::string scenario_name = "all", scenario_out = "scenario_out";
    ScenarioOptions scenario_options;
    auto* scen = app.add_subcommand("scenario", "reproduce a limiting-case claim");
    scen->add_option("--scenario", scenario_name, "scenario name or 'all'");
    scen->add_option("--out", scenario_out, "output directory");
    scen->add_option("--proxy-factor", scenario_options.proxy_factor, "large-coupling proxy factor");
    scen->add_option("--tolerance", scenario_options.limit_tolerance, "tolerance of the limit checks");
    scen->add_option("--loop-steps", scenario_options.loop_steps, "loop discretisation");
    scen->add_option("--fine-steps", scenario_options.fine_steps, "discretisation for 1e-8 checks");
    scen->add_flag("--list", "list scenario names");

    std::string plot_csv, plot_x, plot_out = "plot.svg";
    std::vector<std::string> plot_y;
    auto* plot = app.add_subcommand("plot", "SVG line plot from a sweep CSV");
    plot->add_option("--csv", plot_csv, "input CSV")->required();
    plot->add_option("--x", plot_x, "x column")->required();
    plot->add_option("--y", plot_y, "y column(s)")->required();
    plot->add_option("--out", plot_out, "output SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*eig) return cmd_eig(eig_flags, eig_phi);
        if (*mag) return cmd_berry_magnetic(mag_flags);
        if (*q) return cmd_berry_quantized(q_flags);
        if (*tm) return cmd_berry_twomode(tm_flags);
        if (*mix) {
            if (partition.empty()) partition = two_mode ? "particle1-fields" : "particle2";
            return cmd_mixed_phase(mix_flags, partition, two_mode);
        }
        if (*conc) return cmd_concurrence(conc_flags);
        if (*sweep) return cmd_sweep(sweep_flags, axis, values, range, outputs, workers, sweep_out);
        if (*scen) {
            if (scen->count("--list")) {
                for (const auto& n : scenario_names()) std::cout << n << '\n';
                return 0;
            }
            return cmd_scenario(scenario_name, scenario_out, scenario_options);
        }
        if (*plot) {
            emit_plot(plot_csv, plot_x, plot_y, plot_out);
            std::cerr << "wrote " << plot_out << '\n';
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidInput ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
