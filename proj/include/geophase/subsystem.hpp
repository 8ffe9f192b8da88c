// subsystem.hpp — reduced states, concurrence and mixed-state geometric phases
//
// The mixed-state phase combines the weights p_l and the Berry phases beta_l
// of the eigenvectors of a reduced density matrix:  Gamma = arg sum_l p_l e^{i beta_l}.
// Closed forms are evaluated in that arg form; the arctan displays are kept as
// cross-checks because they only fix Gamma modulo pi.

#pragma once

#include "geophase/core_model.hpp"
#include "geophase/eigensystem.hpp"

#include <Eigen/Dense>

#include <vector>

namespace geophase {

enum class Partition {
    Particle2,        // keep particle 2, trace particle 1 and the field(s)
    Particle1Fields,  // keep particle 1 and the field(s), trace particle 2
};

struct ReducedState {
    Eigen::MatrixXcd matrix;
    Partition partition{Partition::Particle2};
};

inline constexpr double kReducedTol = 1e-12;
inline constexpr double kReducedGapTol = 1e-9;
inline constexpr double kWeightDriftTol = 1e-9;

// Partial trace of a block state.  Both factors are qubits here.
ReducedState reduce_block(const Eigen::Vector4cd& state, Partition keep);
ReducedState reduce_to_particle2(const EigenFrame& frame);

// The particle-2 matrix written in terms of (chi, xi, eta) at azimuth phi.
Eigen::Matrix2cd particle2_matrix_from_angles(double chi, double xi, double eta, double phi);

// Trace over particle 2 of a two-mode state; the result is indexed like a
// TwoModeState with inner_dim 2 (particle 1).
ReducedState reduce_two_mode_over_particle2(const TwoModeState& state);

// Throws NumericalFailure unless Hermitian, unit trace and positive to 1e-12.
void check_reduced_state(const ReducedState& rho);

// 2 |c1 c4 - c2 c3| across (particle 1 + field | particle 2).
double concurrence_pure(const Eigen::Vector4cd& state);
double concurrence_pure(const EigenFrame& frame);

// sin(chi) sin((xi - eta)/2), signed.
double concurrence_from_angles(double chi, double xi, double eta) noexcept;

struct MixedPhaseReport {
    std::vector<double> weights;       // p_l, descending
    std::vector<double> berry_phases;  // beta_l
    double numeric_phase{0.0};         // arg sum p_l e^{i beta_l}
    double analytic_phase{0.0};
    bool has_analytic{false};
    double difference_mod_2pi{0.0};
    int loop_steps{0};
};

// Azimuth loop of an existing trace.  For Particle2 the analytic partner is
// gamma2_closed_form of the phi = 0 angles; for Particle1Fields the kept
// state does not move, so the partner is 0.
MixedPhaseReport mixed_phase_numeric(const LoopTrace& loop, Partition keep);

struct ClosedFormPhase {
    double value{0.0};          // arg form, (-pi, pi] for gamma2, unreduced offset for 2q
    double display_value{0.0};  // principal-branch arctan display
    bool branch_singular{false};
};

ClosedFormPhase gamma2_closed_form(double chi, double xi, double eta);

struct TwoModeSubsystemPhase {
    double value{0.0};  // arg form
    double concurrence_form{0.0};  // arctan display with sqrt(1 - c^2)
    double angle_form{0.0};        // arctan display with the explicit angle radical
    bool branch_singular{false};
    bool concurrence_limit{false};  // c ~ 1: inner factor replaced by its linear term
};

TwoModeSubsystemPhase gamma_2q_subsystem_analytic(double chi, double xi, double eta,
                                                  int n_photon, int n_prime,
                                                  double solid_angle);

// Fixed theta, phi: 0 -> 2 pi.  Reduced eigenvectors are tracked by overlap and
// phase-referenced to the rotated phi = 0 eigenvectors, so beta_l is the open-path
// connection integral (the rotated reduced state need not close on itself).
// The closed form is reported next to the numeric value, never asserted equal.
MixedPhaseReport mixed_phase_two_mode_numeric(const ModelParams& p, int label_j,
                                              double theta, int steps);

} // namespace geophase
