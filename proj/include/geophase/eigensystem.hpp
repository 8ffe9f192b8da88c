// eigensystem.hpp — 4x4 Hermitian eigenpairs, gauge fixing, angle extraction, loop tracking

#pragma once

#include "geophase/core_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace geophase {

// One eigenpair of the block Hamiltonian.  Amplitudes follow the block basis;
// after gauge fixing they read
//   (e^{-i phi} cos(chi/2) sin(xi/2), cos(chi/2) cos(xi/2),
//    e^{-i phi} sin(chi/2) sin(eta/2), sin(chi/2) cos(eta/2)).
struct EigenFrame {
    double energy{0.0};
    Eigen::Vector4cd amplitudes{Eigen::Vector4cd::Zero()};
    int label{0};  // 1..4, ascending energy
    double chi{0.0};
    double xi{0.0};
    double eta{0.0};
    bool angles_set{false};
    bool xi_degenerate{false};   // |c1|^2 + |c2|^2 ~ 0, xi set to 0
    bool eta_degenerate{false};  // |c3|^2 + |c4|^2 ~ 0, eta set to 0
};

struct Angles {
    double chi{0.0};
    double xi{0.0};
    double eta{0.0};
    bool xi_degenerate{false};
    bool eta_degenerate{false};
};

struct LoopSample {
    double parameter{0.0};
    EigenFrame frame;
};

struct LoopTrace {
    int label{0};
    std::vector<LoopSample> samples;
    double min_gap{0.0};
};

inline constexpr double kDegeneracyRelTol = 1e-9;
inline constexpr double kContinuityMin = 0.9;
inline constexpr int kDefaultLoopSteps = 1024;

// 1e-9 * max(1, spectral range)
double degeneracy_tolerance(double spectral_range) noexcept;

// Eigenpairs in ascending energy, labels 1..4; angles unset.
std::array<EigenFrame, 4> hermitian_eigensystem(const BlockHamiltonian& h);

// Removes the global phase so (c1 e^{i phi}, c2, c3 e^{i phi}, c4) are real,
// with c2 >= 0 (else c4 >= 0, else c1 e^{i phi} >= 0).  Throws RealityViolation
// when the rotated components are not real to `reality_tol`.
EigenFrame fix_gauge(EigenFrame frame, double phi, double reality_tol = 1e-9);

// Reality tolerance for eigenvectors of a block with norm `h_norm` whose level
// sits `gap` away from its neighbours: max(1e-9, 1e3 eps h_norm / gap).
double reality_tolerance(double h_norm, double gap) noexcept;

Angles extract_angles(const EigenFrame& frame, double phi);

// Inverse of extract_angles.
Eigen::Vector4cd amplitudes_from_angles(double chi, double xi, double eta, double phi);

// Diagonalise, gauge-fix and extract angles at azimuth phi.
std::array<EigenFrame, 4> eigenframes(const ModelParams& p, double phi);

// Stable greedy assignment by descending |<previous_i|current_j>|; near ties
// (below 1e-12) go to the lower previous index.  Returns assignment[i] = j.
std::vector<int> match_by_overlap(const std::vector<Eigen::VectorXcd>& previous,
                                  const std::vector<Eigen::VectorXcd>& current);

// Frames on phi_k = 2 pi k / steps, k = 0..steps-1, continuity-tracked from
// the k = 0 ordering.  Throws DegeneracyEncountered or NullOverlap.
LoopTrace track_loop(const ModelParams& p, int label_j, int steps);
std::array<LoopTrace, 4> track_all_levels(const ModelParams& p, int steps);

} // namespace geophase
