// eigensystem.cpp

#include "geophase/eigensystem.hpp"
#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

namespace geophase {

namespace {

constexpr double kPivotTiny = 1e-12;
constexpr double kRealityTol = 1e-9;
constexpr double kWeightTiny = 1e-14;

// (c1 e^{i phi}, c2, c3 e^{i phi}, c4)
Eigen::Vector4cd corotated(const Eigen::Vector4cd& c, double phi) {
    const cplx rot = std::polar(1.0, phi);
    return Eigen::Vector4cd(c(0) * rot, c(1), c(2) * rot, c(3));
}

double smallest_gap(const std::array<EigenFrame, 4>& frames) {
    double gap = frames[1].energy - frames[0].energy;
    for (int k = 2; k < 4; ++k) gap = std::min(gap, frames[k].energy - frames[k - 1].energy);
    return gap;
}

void check_gap(const std::array<EigenFrame, 4>& frames, double phi) {
    const double range = frames[3].energy - frames[0].energy;
    const double gap = smallest_gap(frames);
    if (gap < degeneracy_tolerance(range)) {
        throw Error(ErrorKind::DegeneracyEncountered,
                    "eigenvalue gap " + std::to_string(gap) + " at phi=" + std::to_string(phi));
    }
}

} // namespace

double reality_tolerance(double h_norm, double gap) noexcept {
    const double conditioned = 1e3 * std::numeric_limits<double>::epsilon() * h_norm / gap;
    return std::max(kRealityTol, conditioned);
}

double degeneracy_tolerance(double spectral_range) noexcept {
    return kDegeneracyRelTol * std::max(1.0, spectral_range);
}

std::array<EigenFrame, 4> hermitian_eigensystem(const BlockHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h.entries);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalFailure, "eigen decomposition failed");
    }
    std::array<EigenFrame, 4> frames;
    for (int k = 0; k < 4; ++k) {
        frames[k].energy = solver.eigenvalues()(k);
        frames[k].amplitudes = solver.eigenvectors().col(k);
        frames[k].label = k + 1;
    }
    return frames;
}

EigenFrame fix_gauge(EigenFrame frame, double phi, double reality_tol) {
    const Eigen::Vector4cd rotated = corotated(frame.amplitudes, phi);
    // The phase is read off the largest component; small components of a
    // nearly decoupled level carry only their absolute accuracy.
    Eigen::Index largest = 0;
    rotated.cwiseAbs().maxCoeff(&largest);
    const cplx value = rotated(largest);
    if (std::abs(value) < kPivotTiny) {
        throw Error(ErrorKind::InvalidInput, "fix_gauge: null state");
    }
    frame.amplitudes *= std::conj(value) / std::abs(value);

    Eigen::Vector4cd fixed = corotated(frame.amplitudes, phi);
    const double worst = fixed.imag().cwiseAbs().maxCoeff();
    if (worst > reality_tol) {
        throw Error(ErrorKind::RealityViolation,
                    "imaginary residual " + std::to_string(worst) + " after gauge fixing");
    }

    // Sign convention: c2 >= 0, else c4 >= 0, else c1 e^{i phi} >= 0.
    for (int pivot : {1, 3, 0, 2}) {
        if (std::abs(fixed(pivot)) >= kPivotTiny) {
            if (fixed(pivot).real() < 0.0) frame.amplitudes = -frame.amplitudes;
            break;
        }
    }
    return frame;
}

Angles extract_angles(const EigenFrame& frame, double phi) {
    const Eigen::Vector4cd r = corotated(frame.amplitudes, phi);
    const double upper = std::norm(r(0)) + std::norm(r(1));
    const double lower = std::norm(r(2)) + std::norm(r(3));

    Angles a;
    a.chi = 2.0 * std::atan2(std::sqrt(lower), std::sqrt(upper));
    if (upper < kWeightTiny) {
        a.xi_degenerate = true;
    } else {
        a.xi = 2.0 * std::atan2(r(0).real(), r(1).real());
    }
    if (lower < kWeightTiny) {
        a.eta_degenerate = true;
    } else {
        a.eta = 2.0 * std::atan2(r(2).real(), r(3).real());
    }
    return a;
}

Eigen::Vector4cd amplitudes_from_angles(double chi, double xi, double eta, double phi) {
    const cplx back = std::polar(1.0, -phi);
    const double c = std::cos(0.5 * chi);
    const double s = std::sin(0.5 * chi);
    return Eigen::Vector4cd(back * c * std::sin(0.5 * xi), c * std::cos(0.5 * xi),
                            back * s * std::sin(0.5 * eta), s * std::cos(0.5 * eta));
}

std::array<EigenFrame, 4> eigenframes(const ModelParams& p, double phi) {
    auto frames = hermitian_eigensystem(build_block_hamiltonian(p, phi));
    check_gap(frames, phi);
    const double h_norm = std::max(std::abs(frames[0].energy), std::abs(frames[3].energy));
    for (int k = 0; k < 4; ++k) {
        double gap = std::numeric_limits<double>::infinity();
        if (k > 0) gap = std::min(gap, frames[k].energy - frames[k - 1].energy);
        if (k < 3) gap = std::min(gap, frames[k + 1].energy - frames[k].energy);
        EigenFrame& f = frames[k];
        f = fix_gauge(f, phi, reality_tolerance(h_norm, gap));
        const Angles a = extract_angles(f, phi);
        f.chi = a.chi;
        f.xi = a.xi;
        f.eta = a.eta;
        f.xi_degenerate = a.xi_degenerate;
        f.eta_degenerate = a.eta_degenerate;
        f.angles_set = true;
    }
    return frames;
}

std::vector<int> match_by_overlap(const std::vector<Eigen::VectorXcd>& previous,
                                  const std::vector<Eigen::VectorXcd>& current) {
    const int n_prev = static_cast<int>(previous.size());
    const int n_cur = static_cast<int>(current.size());
    if (n_cur < n_prev) {
        throw Error(ErrorKind::InvalidInput, "match_by_overlap: fewer current vectors");
    }

    struct Candidate {
        double overlap;
        int prev;
        int cur;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(n_prev) * n_cur);
    for (int i = 0; i < n_prev; ++i) {
        for (int j = 0; j < n_cur; ++j) {
            candidates.push_back({std::abs(previous[i].dot(current[j])), i, j});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         if (std::abs(a.overlap - b.overlap) < kPivotTiny) {
                             return std::tie(a.prev, a.cur) < std::tie(b.prev, b.cur);
                         }
                         return a.overlap > b.overlap;
                     });

    std::vector<int> assignment(n_prev, -1);
    std::vector<bool> taken(n_cur, false);
    int remaining = n_prev;
    for (const auto& c : candidates) {
        if (remaining == 0) break;
        if (assignment[c.prev] >= 0 || taken[c.cur]) continue;
        assignment[c.prev] = c.cur;
        taken[c.cur] = true;
        --remaining;
    }
    return assignment;
}

std::array<LoopTrace, 4> track_all_levels(const ModelParams& p, int steps) {
    p.validate();
    if (steps < 16) {
        throw Error(ErrorKind::InvalidInput, "track_loop: steps must be >= 16");
    }
    std::array<LoopTrace, 4> traces;
    double min_gap = 0.0;
    std::vector<Eigen::VectorXcd> previous(4);

    for (int k = 0; k < steps; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / steps;
        const auto frames = eigenframes(p, phi);
        const double gap = smallest_gap(frames);
        min_gap = k == 0 ? gap : std::min(min_gap, gap);

        std::vector<int> assignment{0, 1, 2, 3};
        if (k > 0) {
            std::vector<Eigen::VectorXcd> current(4);
            for (int j = 0; j < 4; ++j) current[j] = frames[j].amplitudes;
            assignment = match_by_overlap(previous, current);
        }
        for (int level = 0; level < 4; ++level) {
            const EigenFrame& f = frames[assignment[level]];
            if (k > 0) {
                const double overlap = std::abs(previous[level].dot(f.amplitudes));
                if (overlap <= kContinuityMin) {
                    throw Error(ErrorKind::NullOverlap,
                                "tracking lost at phi=" + std::to_string(phi) +
                                    " (overlap " + std::to_string(overlap) + ")");
                }
            }
            previous[level] = f.amplitudes;
            traces[level].samples.push_back({phi, f});
        }
    }
    for (int level = 0; level < 4; ++level) {
        traces[level].label = level + 1;
        traces[level].min_gap = min_gap;
    }
    return traces;
}

LoopTrace track_loop(const ModelParams& p, int label_j, int steps) {
    if (label_j < 1 || label_j > 4) {
        throw Error(ErrorKind::InvalidInput, "label_j must be in 1..4");
    }
    auto traces = track_all_levels(p, steps);
    return std::move(traces[label_j - 1]);
}

} // namespace geophase
