// sweep.cpp

#include "geophase/sweep.hpp"
#include "geophase/eigensystem.hpp"
#include "geophase/errors.hpp"
#include "geophase/phases.hpp"
#include "geophase/subsystem.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <thread>

namespace geophase {

namespace {

const std::map<std::string, Quantity>& quantity_table() {
    static const std::map<std::string, Quantity> table{
        {"magnetic", Quantity::Magnetic},   {"quantized", Quantity::Quantized},
        {"twomode", Quantity::TwoMode},     {"mixed2", Quantity::Mixed2},
        {"mixed2q", Quantity::Mixed2q},     {"concurrence", Quantity::Concurrence},
    };
    return table;
}

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

void clear_phases(ResultRow& row) {
    for (auto* field : {&row.magnetic_numeric, &row.magnetic_analytic, &row.magnetic_diff,
                        &row.quantized_numeric, &row.quantized_analytic, &row.quantized_diff,
                        &row.twomode_numeric, &row.twomode_analytic, &row.twomode_diff,
                        &row.mixed2_numeric, &row.mixed2_analytic, &row.mixed2_diff,
                        &row.mixed2q_numeric, &row.mixed2q_analytic, &row.mixed2q_diff,
                        &row.concurrence}) {
        field->reset();
    }
    row.converged.reset();
}

void note_convergence(ResultRow& row, bool converged) {
    row.converged = row.converged.value_or(true) && converged;
}

} // namespace

std::string to_string(Quantity q) {
    for (const auto& [name, value] : quantity_table()) {
        if (value == q) return name;
    }
    return "unknown";
}

Quantity quantity_from_string(const std::string& name) {
    const auto it = quantity_table().find(name);
    if (it == quantity_table().end()) {
        throw Error(ErrorKind::InvalidInput, "unknown output quantity '" + name + "'");
    }
    return it->second;
}

std::set<Quantity> all_quantities() {
    std::set<Quantity> out;
    for (const auto& [name, value] : quantity_table()) out.insert(value);
    return out;
}

const std::vector<std::string>& axis_names() {
    static const std::vector<std::string> names{"omega1", "nu",      "lambda",  "coupling_J",
                                                "omega2", "n_photon", "n_prime", "theta"};
    return names;
}

std::string canonical_axis(const std::string& axis) {
    if (axis == "n") return "n_photon";
    if (axis == "n'" || axis == "nprime") return "n_prime";
    if (axis == "J") return "coupling_J";
    const auto& names = axis_names();
    if (std::find(names.begin(), names.end(), axis) == names.end()) {
        throw Error(ErrorKind::InvalidInput, "unknown sweep axis '" + axis + "'");
    }
    return axis;
}

void apply_axis(ModelParams& p, double& theta, const std::string& axis, double value) {
    const std::string name = canonical_axis(axis);
    auto as_count = [&](double v) {
        if (v < 0.0 || v != std::floor(v)) {
            throw Error(ErrorKind::InvalidInput, "photon-number axis needs nonnegative integers");
        }
        return static_cast<int>(v);
    };
    if (name == "omega1") p.omega1 = value;
    else if (name == "nu") p.nu = value;
    else if (name == "lambda") p.lambda = value;
    else if (name == "coupling_J") p.coupling_J = value;
    else if (name == "omega2") p.omega2 = value;
    else if (name == "n_photon") p.n_photon = as_count(value);
    else if (name == "n_prime") p.n_prime = as_count(value);
    else theta = value;
}

void SweepSpec::validate() const {
    base.validate();
    if (loop_steps < 16) throw Error(ErrorKind::InvalidInput, "loop_steps must be >= 16");
    if (levels.empty()) throw Error(ErrorKind::InvalidInput, "no levels selected");
    for (int j : levels) {
        if (j < 1 || j > 4) throw Error(ErrorKind::InvalidInput, "levels must be in 1..4");
    }
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "sweep has no values");
    if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidInput, "theta must be finite");
    if (workers < 1) throw Error(ErrorKind::InvalidInput, "workers must be >= 1");
    ModelParams probe = base;
    double probe_theta = theta;
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "sweep values must be finite");
        apply_axis(probe, probe_theta, axis, v);
    }
}

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> columns{
        "omega1", "nu", "lambda", "coupling_J", "omega2", "n_photon", "n_prime", "theta",
        "loop_steps", "level", "energy", "chi", "xi", "eta",
        "berry_magnetic_numeric", "berry_magnetic_analytic", "berry_magnetic_diff",
        "berry_quantized_numeric", "berry_quantized_analytic", "berry_quantized_diff",
        "twomode_numeric", "twomode_analytic", "twomode_diff",
        "mixed2_numeric", "mixed2_analytic", "mixed2_diff",
        "mixed2q_numeric", "mixed2q_analytic", "mixed2q_diff",
        "concurrence", "min_gap", "converged", "error"};
    return columns;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<std::string> format_row(const ResultRow& r) {
    const ModelParams& p = r.params;
    return {format_double(p.omega1), format_double(p.nu), format_double(p.lambda),
            format_double(p.coupling_J), format_double(p.omega2), std::to_string(p.n_photon),
            std::to_string(p.n_prime), format_double(r.theta), std::to_string(r.loop_steps),
            std::to_string(r.level), cell(r.energy), cell(r.chi), cell(r.xi), cell(r.eta),
            cell(r.magnetic_numeric), cell(r.magnetic_analytic), cell(r.magnetic_diff),
            cell(r.quantized_numeric), cell(r.quantized_analytic), cell(r.quantized_diff),
            cell(r.twomode_numeric), cell(r.twomode_analytic), cell(r.twomode_diff),
            cell(r.mixed2_numeric), cell(r.mixed2_analytic), cell(r.mixed2_diff),
            cell(r.mixed2q_numeric), cell(r.mixed2q_analytic), cell(r.mixed2q_diff),
            cell(r.concurrence), cell(r.min_gap),
            r.converged ? (*r.converged ? "1" : "0") : "", r.error};
}

std::vector<ResultRow> evaluate_point(const ModelParams& params, double theta,
                                      const std::vector<int>& levels, int loop_steps,
                                      const std::set<Quantity>& outputs) {
    std::vector<ResultRow> rows;
    for (int j : levels) {
        ResultRow row;
        row.params = params;
        row.theta = theta;
        row.loop_steps = loop_steps;
        row.level = j;
        rows.push_back(row);
    }
    auto fail_all = [&](const Error& e) {
        for (auto& row : rows) {
            clear_phases(row);
            row.error = std::string(to_string(e.kind()));
        }
        return rows;
    };

    std::array<EigenFrame, 4> frames;
    try {
        params.validate();
        frames = eigenframes(params, 0.0);
    } catch (const Error& e) {
        return fail_all(e);
    }
    for (auto& row : rows) {
        const EigenFrame& f = frames[row.level - 1];
        row.energy = f.energy;
        row.chi = f.chi;
        row.xi = f.xi;
        row.eta = f.eta;
        double gap = frames[1].energy - frames[0].energy;
        for (int k = 2; k < 4; ++k) gap = std::min(gap, frames[k].energy - frames[k - 1].energy);
        row.min_gap = gap;
    }

    const bool need_loop = outputs.count(Quantity::Magnetic) || outputs.count(Quantity::Mixed2);
    std::array<LoopTrace, 4> traces;
    std::array<PhaseReport, 4> magnetic;
    if (need_loop) {
        try {
            traces = track_all_levels(params, loop_steps);
            if (outputs.count(Quantity::Magnetic)) magnetic = berry_magnetic_from_traces(params, traces);
        } catch (const Error& e) {
            return fail_all(e);
        }
    }

    for (auto& row : rows) {
        const int j = row.level;
        const EigenFrame& f = frames[j - 1];
        try {
            if (need_loop) row.min_gap = traces[j - 1].min_gap;
            if (outputs.count(Quantity::Magnetic)) {
                const PhaseReport& r = magnetic[j - 1];
                row.magnetic_numeric = r.numeric_phase;
                row.magnetic_analytic = r.analytic_phase;
                row.magnetic_diff = r.difference_mod_2pi;
                note_convergence(row, r.converged);
            }
            if (outputs.count(Quantity::Quantized)) {
                const PhaseReport r = berry_quantized_numeric(params, j, loop_steps);
                row.quantized_numeric = r.numeric_phase;
                row.quantized_analytic = r.analytic_phase;
                row.quantized_diff = r.difference_mod_2pi;
                note_convergence(row, r.converged);
            }
            if (outputs.count(Quantity::TwoMode)) {
                const PhaseReport r = two_mode_berry_numeric(params, j, theta, loop_steps);
                row.twomode_numeric = r.numeric_phase;
                row.twomode_analytic = r.analytic_phase;
                row.twomode_diff = r.difference_mod_2pi;
                note_convergence(row, r.converged);
            }
            if (outputs.count(Quantity::Mixed2)) {
                const MixedPhaseReport r = mixed_phase_numeric(traces[j - 1], Partition::Particle2);
                row.mixed2_numeric = r.numeric_phase;
                row.mixed2_analytic = r.analytic_phase;
                row.mixed2_diff = r.difference_mod_2pi;
            }
            if (outputs.count(Quantity::Mixed2q)) {
                const MixedPhaseReport r = mixed_phase_two_mode_numeric(params, j, theta, loop_steps);
                row.mixed2q_numeric = r.numeric_phase;
                row.mixed2q_analytic = r.analytic_phase;
                row.mixed2q_diff = r.difference_mod_2pi;
            }
            if (outputs.count(Quantity::Concurrence)) row.concurrence = concurrence_pure(f);
        } catch (const Error& e) {
            clear_phases(row);
            row.error = std::string(to_string(e.kind()));
        }
    }
    return rows;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t n_points = spec.values.size();
    std::vector<std::vector<ResultRow>> per_point(n_points);

    auto work = [&](std::size_t i) {
        ModelParams p = spec.base;
        double theta = spec.theta;
        apply_axis(p, theta, spec.axis, spec.values[i]);
        per_point[i] = evaluate_point(p, theta, spec.levels, spec.loop_steps, spec.outputs);
    };

    const std::size_t workers = std::min<std::size_t>(spec.workers, n_points);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_points; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n_points; i = next++) work(i);
            });
        }
    }

    std::vector<ResultRow> rows;
    for (auto& block : per_point) {
        for (auto& row : block) rows.push_back(std::move(row));
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    auto write_line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    write_line(result_columns());
    for (const auto& row : rows) write_line(format_row(row));
}

ModelParams params_from_json(const nlohmann::json& doc, ModelParams base) {
    if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "'base' must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "omega1") base.omega1 = value.get<double>();
        else if (key == "nu") base.nu = value.get<double>();
        else if (key == "lambda") base.lambda = value.get<double>();
        else if (key == "coupling_J") base.coupling_J = value.get<double>();
        else if (key == "omega2") base.omega2 = value.get<double>();
        else if (key == "n_photon") base.n_photon = value.get<int>();
        else if (key == "n_prime") base.n_prime = value.get<int>();
        else throw Error(ErrorKind::InvalidInput, "unknown parameter '" + key + "'");
    }
    return base;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& doc) {
    SweepSpec spec;
    try {
        if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
        for (const auto& [key, value] : doc.items()) {
            if (key == "base") spec.base = params_from_json(value);
            else if (key == "axis") spec.axis = value.get<std::string>();
            else if (key == "values") spec.values = value.get<std::vector<double>>();
            else if (key == "levels") spec.levels = value.get<std::vector<int>>();
            else if (key == "loop_steps") spec.loop_steps = value.get<int>();
            else if (key == "theta") spec.theta = value.get<double>();
            else if (key == "workers") spec.workers = value.get<int>();
            else if (key == "outputs") {
                spec.outputs.clear();
                for (const auto& name : value.get<std::vector<std::string>>()) {
                    spec.outputs.insert(quantity_from_string(name));
                }
            } else {
                throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
    }
    return spec;
}

std::vector<double> linear_range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw Error(ErrorKind::InvalidInput, "range needs start <= stop and step > 0");
    }
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + step * 1e-9) break;
        out.push_back(v);
    }
    return out;
}

} // namespace geophase
