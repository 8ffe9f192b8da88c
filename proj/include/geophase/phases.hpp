// phases.hpp — whole-system geometric phases: discrete Wilson loops and closed forms
//
// Three loops are covered:
//   magnetic   field azimuth phi: 0 -> 2 pi, instantaneous eigenstates of the block
//   quantized  phase shift exp(-i phi a'a) applied to a fixed eigenstate
//   two-mode   exp(-i phi J_z) exp(-i theta J_y) applied to |psi_j> (x) |n'>
// Numeric values come from products of neighbouring overlaps; analytic values
// from the closed forms below.  All comparisons are made modulo 2 pi.

#pragma once

#include "geophase/core_model.hpp"
#include "geophase/eigensystem.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>

namespace geophase {

struct PhaseReport {
    double numeric_phase{0.0};       // (-pi, pi]
    double analytic_phase{0.0};      // unreduced
    double difference_mod_2pi{0.0};  // wrap(analytic - numeric)
    int loop_steps{0};
    bool converged{false};           // |numeric(steps) - numeric(steps/2)| < kConvergenceTol
    double halved_numeric_phase{0.0};
};

inline constexpr double kConvergenceTol = 1e-6;
inline constexpr double kNullOverlap = 1e-6;
inline constexpr double kNormTol = 1e-10;

// Reduces to (-pi, pi].
double wrap_phase(double x) noexcept;

// |wrap(a - b)|
double phase_distance(double a, double b) noexcept;

// Running product of neighbouring overlaps <s_k|s_{k+1}>, accumulated as a sum
// of arguments.  Throws NullOverlap when a link has modulus below 1e-6.
class WilsonLine {
public:
    void push(const Eigen::VectorXcd& state);

    // -arg of the accumulated product, optionally closed back to the first state.
    double phase(bool closed) const;

    std::size_t size() const noexcept { return count_; }

private:
    Eigen::VectorXcd first_;
    Eigen::VectorXcd last_;
    double arg_sum_{0.0};
    std::size_t count_{0};
};

// -arg( prod_k <s_k|s_{k+1}> [ * <s_M|s_0> if closed ] ), in (-pi, pi].
double wilson_loop_phase(std::span<const Eigen::VectorXcd> states, bool closed);

// 2 pi (1 - cos x)
double solid_angle_fixed_latitude(double x) noexcept;

// Solid angle of the theta = const circle on the Poincare sphere: 2 pi (1 - cos theta).
double loop_solid_angle(double theta) noexcept;

// (1/2) [sin^2(chi/2) Omega(eta) + cos^2(chi/2) Omega(xi)]
double berry_magnetic_analytic(double chi, double xi, double eta) noexcept;

PhaseReport berry_magnetic_numeric(const ModelParams& p, int label_j, int steps);
std::array<PhaseReport, 4> berry_magnetic_all_levels(const ModelParams& p, int steps);

// Same, reusing already-tracked loops (the halved loop is still tracked here).
std::array<PhaseReport, 4> berry_magnetic_from_traces(const ModelParams& p,
                                                      const std::array<LoopTrace, 4>& traces);

// Numeric half of berry_magnetic_numeric for an existing trace.
double berry_magnetic_from_trace(const LoopTrace& trace);

// pi (1 - cos chi) + 2 pi n
double berry_quantized_analytic(double chi, int n_photon) noexcept;

PhaseReport berry_quantized_numeric(const ModelParams& p, int label_j, int steps);

// -(1/2) Omega [(n - n') + sin^2(chi/2)]
double two_mode_berry_analytic(double chi, int n_photon, int n_prime, double solid_angle) noexcept;

// Open path phi: 0 -> 2 pi at fixed theta, endpoint included; the two-mode
// state does not return to its ray when sectors of both parities are occupied,
// so no closing link is added.  Under the unitary convention the result is
// 2 pi cos(theta) <J_z>; the report carries its offset from the closed form.
PhaseReport two_mode_berry_numeric(const ModelParams& p, int label_j, double theta, int steps);

// The raw numeric loops, exposed for callers that need them without a report.
double quantized_loop_phase(const ModelParams& p, const Eigen::Vector4cd& state, int steps);
double two_mode_loop_phase(const TwoModeState& state, double theta, int steps);

} // namespace geophase
