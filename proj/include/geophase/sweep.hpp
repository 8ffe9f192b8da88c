// sweep.hpp — parameter sweeps and the CSV row schema

#pragma once

#include "geophase/core_model.hpp"

#include <json.hpp>

#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace geophase {

enum class Quantity {
    Magnetic,     // azimuth-loop Berry phase
    Quantized,    // phase-shift loop
    TwoMode,      // two-mode SU(2) loop at fixed theta
    Mixed2,       // particle-2 mixed-state phase
    Mixed2q,      // particle-1 + fields mixed-state phase, two-mode loop
    Concurrence,
};

std::string to_string(Quantity q);
Quantity quantity_from_string(const std::string& name);  // throws InvalidInput
std::set<Quantity> all_quantities();

struct SweepSpec {
    ModelParams base;
    std::string axis{"lambda"};
    std::vector<double> values;
    std::vector<int> levels{1, 2, 3, 4};
    int loop_steps{1024};
    double theta{std::numbers::pi / 2};
    std::set<Quantity> outputs{Quantity::Magnetic};
    int workers{1};

    // Throws Error(InvalidInput) on unknown axis, bad levels, loop_steps < 16,
    // non-finite values, or negative/non-integer photon numbers on n axes.
    void validate() const;
};

// Accepted axis names; "n", "n'" and "J" are aliases.
const std::vector<std::string>& axis_names();
std::string canonical_axis(const std::string& axis);

// Sets `axis` to `value` on (params, theta).
void apply_axis(ModelParams& params, double& theta, const std::string& axis, double value);

struct ResultRow {
    ModelParams params;
    double theta{0.0};
    int loop_steps{0};
    int level{0};
    std::optional<double> energy, chi, xi, eta;
    std::optional<double> magnetic_numeric, magnetic_analytic, magnetic_diff;
    std::optional<double> quantized_numeric, quantized_analytic, quantized_diff;
    std::optional<double> twomode_numeric, twomode_analytic, twomode_diff;
    std::optional<double> mixed2_numeric, mixed2_analytic, mixed2_diff;
    std::optional<double> mixed2q_numeric, mixed2q_analytic, mixed2q_diff;
    std::optional<double> concurrence;
    std::optional<double> min_gap;
    std::optional<bool> converged;
    std::string error;  // ErrorKind name, empty on success
};

const std::vector<std::string>& result_columns();

// 17 significant digits, '.' decimal point, independent of locale.
std::string format_double(double v);

std::vector<std::string> format_row(const ResultRow& row);

// Rows for every requested level at one parameter point.  Numerical failures
// become rows with `error` set and no phase values.
std::vector<ResultRow> evaluate_point(const ModelParams& params, double theta,
                                      const std::vector<int>& levels, int loop_steps,
                                      const std::set<Quantity>& outputs);

// One row per (value x level), in axis order then level order, independent of `workers`.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// JSON mirrors SweepSpec; "base" holds ModelParams field names.
SweepSpec sweep_spec_from_json(const nlohmann::json& doc);
ModelParams params_from_json(const nlohmann::json& doc, ModelParams base = {});

// start, start + step, ... up to stop inclusive (within step * 1e-9).
std::vector<double> linear_range(double start, double stop, double step);

} // namespace geophase
