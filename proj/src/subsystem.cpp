// subsystem.cpp

#include "geophase/subsystem.hpp"
#include "geophase/errors.hpp"
#include "geophase/phases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBranchTol = 1e-9;
constexpr double kLimitTol = 1e-12;

struct Spectrum {
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> vectors;
};

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> diagonalize(const ReducedState& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericalFailure, "reduced state diagonalisation failed");
    }
    return solver;
}

// Eigenpairs with weight above kReducedTol, descending.
Spectrum support(const ReducedState& rho) {
    const auto solver = diagonalize(rho);
    Spectrum s;
    for (Eigen::Index k = solver.eigenvalues().size() - 1; k >= 0; --k) {
        const double w = solver.eigenvalues()(k);
        if (w <= kReducedTol) break;
        s.weights.push_back(w);
        s.vectors.emplace_back(solver.eigenvectors().col(k));
    }
    for (std::size_t l = 1; l < s.weights.size(); ++l) {
        if (s.weights[l - 1] - s.weights[l] < kReducedGapTol) {
            throw Error(ErrorKind::ReducedDegeneracy,
                        "reduced eigenvalues " + std::to_string(s.weights[l - 1]) + ", " +
                            std::to_string(s.weights[l]));
        }
    }
    return s;
}

std::vector<Eigen::VectorXcd> all_vectors(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& solver) {
    std::vector<Eigen::VectorXcd> v;
    for (Eigen::Index k = 0; k < solver.eigenvectors().cols(); ++k) {
        v.emplace_back(solver.eigenvectors().col(k));
    }
    return v;
}

// Largest eigenvalues of the current sample, compared with the initial weights.
void check_weights(const Eigen::VectorXd& eigenvalues, const std::vector<double>& weights) {
    const Eigen::Index n = eigenvalues.size();
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const double w = eigenvalues(n - 1 - static_cast<Eigen::Index>(l));
        if (std::abs(w - weights[l]) > kWeightDriftTol) {
            throw Error(ErrorKind::NumericalFailure,
                        "reduced weight drifted from " + std::to_string(weights[l]) + " to " +
                            std::to_string(w));
        }
    }
}

double combine(const std::vector<double>& weights, const std::vector<double>& phases) {
    cplx sum{0.0, 0.0};
    for (std::size_t l = 0; l < weights.size(); ++l) sum += weights[l] * std::polar(1.0, phases[l]);
    return wrap_phase(std::arg(sum));
}

} // namespace

ReducedState reduce_block(const Eigen::Vector4cd& state, Partition keep) {
    ReducedState rho;
    rho.partition = keep;
    rho.matrix = Eigen::MatrixXcd::Zero(2, 2);
    // index k = 2 * (particle1+field) + (particle 2)
    for (int q = 0; q < 2; ++q) {
        for (int s = 0; s < 2; ++s) {
            for (int q2 = 0; q2 < 2; ++q2) {
                for (int s2 = 0; s2 < 2; ++s2) {
                    const cplx term = state(2 * q + s) * std::conj(state(2 * q2 + s2));
                    if (keep == Partition::Particle2 && q == q2) rho.matrix(s, s2) += term;
                    if (keep == Partition::Particle1Fields && s == s2) rho.matrix(q, q2) += term;
                }
            }
        }
    }
    return rho;
}

ReducedState reduce_to_particle2(const EigenFrame& frame) {
    return reduce_block(frame.amplitudes, Partition::Particle2);
}

Eigen::Matrix2cd particle2_matrix_from_angles(double chi, double xi, double eta, double phi) {
    const double c2 = std::pow(std::cos(0.5 * chi), 2);
    const double s2 = std::pow(std::sin(0.5 * chi), 2);
    const double off = 0.5 * (std::sin(xi) * c2 + std::sin(eta) * s2);
    Eigen::Matrix2cd m;
    m(0, 0) = c2 * std::pow(std::sin(0.5 * xi), 2) + s2 * std::pow(std::sin(0.5 * eta), 2);
    m(1, 1) = c2 * std::pow(std::cos(0.5 * xi), 2) + s2 * std::pow(std::cos(0.5 * eta), 2);
    m(0, 1) = std::polar(off, -phi);
    m(1, 0) = std::polar(off, phi);
    return m;
}

ReducedState reduce_two_mode_over_particle2(const TwoModeState& state) {
    if (state.inner_dim() != 4) {
        throw Error(ErrorKind::InvalidInput, "two-mode state must carry both spins");
    }
    const Eigen::Index configs = state.size() / 4;
    // rows: (configuration, particle 1); columns: particle 2
    Eigen::MatrixXcd m(configs * 2, 2);
    for (Eigen::Index c = 0; c < configs; ++c) {
        for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) m(2 * c + s1, s2) = state.amplitudes()(4 * c + 2 * s1 + s2);
        }
    }
    return ReducedState{m * m.adjoint(), Partition::Particle1Fields};
}

void check_reduced_state(const ReducedState& rho) {
    const auto& m = rho.matrix;
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kReducedTol) {
        throw Error(ErrorKind::NumericalFailure, "reduced state not Hermitian");
    }
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > kReducedTol) {
        throw Error(ErrorKind::NumericalFailure, "reduced state trace != 1");
    }
    const auto solver = diagonalize(rho);
    if (solver.eigenvalues().minCoeff() < -kReducedTol ||
        solver.eigenvalues().maxCoeff() > 1.0 + kReducedTol) {
        throw Error(ErrorKind::NumericalFailure, "reduced state eigenvalues outside [0, 1]");
    }
}

double concurrence_pure(const Eigen::Vector4cd& c) {
    return 2.0 * std::abs(c(0) * c(3) - c(1) * c(2));
}

double concurrence_pure(const EigenFrame& frame) {
    return concurrence_pure(frame.amplitudes);
}

double concurrence_from_angles(double chi, double xi, double eta) noexcept {
    return std::sin(chi) * std::sin(0.5 * (xi - eta));
}

MixedPhaseReport mixed_phase_numeric(const LoopTrace& loop, Partition keep) {
    if (loop.samples.size() < 3) {
        throw Error(ErrorKind::InvalidInput, "mixed phase needs a loop of at least 3 samples");
    }
    MixedPhaseReport report;
    report.loop_steps = static_cast<int>(loop.samples.size());

    const Spectrum initial = support(reduce_block(loop.samples.front().frame.amplitudes, keep));
    report.weights = initial.weights;
    const std::size_t n_support = initial.weights.size();

    std::vector<WilsonLine> lines(n_support);
    std::vector<Eigen::VectorXcd> previous = initial.vectors;
    for (std::size_t l = 0; l < n_support; ++l) lines[l].push(previous[l]);

    for (std::size_t k = 1; k < loop.samples.size(); ++k) {
        const ReducedState rho = reduce_block(loop.samples[k].frame.amplitudes, keep);
        const auto solver = diagonalize(rho);
        check_weights(solver.eigenvalues(), report.weights);
        const auto current = all_vectors(solver);
        const auto assignment = match_by_overlap(previous, current);
        for (std::size_t l = 0; l < n_support; ++l) {
            previous[l] = current[assignment[l]];
            lines[l].push(previous[l]);
        }
    }

    for (auto& line : lines) report.berry_phases.push_back(line.phase(true));
    report.numeric_phase = combine(report.weights, report.berry_phases);

    const EigenFrame& start = loop.samples.front().frame;
    report.has_analytic = true;
    report.analytic_phase =
        keep == Partition::Particle2 ? gamma2_closed_form(start.chi, start.xi, start.eta).value : 0.0;
    report.difference_mod_2pi = wrap_phase(report.analytic_phase - report.numeric_phase);
    return report;
}

ClosedFormPhase gamma2_closed_form(double chi, double xi, double eta) {
    const double c2 = std::pow(std::cos(0.5 * chi), 2);
    const double s2 = std::pow(std::sin(0.5 * chi), 2);
    // Bloch vector of the particle-2 state at phi = 0 (|e> = +z).
    const double bloch_z = -(c2 * std::cos(xi) + s2 * std::cos(eta));
    const double bloch_x = c2 * std::sin(xi) + s2 * std::sin(eta);
    const double r = std::hypot(bloch_x, bloch_z);
    if (r < kReducedGapTol) {
        throw Error(ErrorKind::ReducedDegeneracy, "particle-2 state maximally mixed");
    }

    // Eigenvector along +/- the Bloch vector has |<e|u>|^2 = (1 +/- z/r)/2 and
    // acquires 2 pi |<e|u>|^2 around the azimuth loop.
    const double p_plus = 0.5 * (1.0 + r);
    const double p_minus = 0.5 * (1.0 - r);
    const double beta_plus = kPi * (1.0 + bloch_z / r);
    const double beta_minus = kPi * (1.0 - bloch_z / r);

    ClosedFormPhase out;
    out.value = wrap_phase(std::arg(p_plus * std::polar(1.0, beta_plus) +
                                    p_minus * std::polar(1.0, beta_minus)));

    const double radical =
        std::sqrt(2.0 * std::pow(std::sin(chi), 2) * std::cos(eta - xi) + std::cos(2.0 * chi) + 3.0);
    const double inner = 2.0 * kPi * (std::cos(eta) * s2 + std::cos(xi) * c2) / radical;
    out.branch_singular = std::abs(std::cos(inner)) < kBranchTol;
    out.display_value = -std::atan(0.5 * radical * std::tan(inner));
    return out;
}

TwoModeSubsystemPhase gamma_2q_subsystem_analytic(double chi, double xi, double eta,
                                                  int n_photon, int n_prime,
                                                  double solid_angle) {
    const double offset = -0.5 * solid_angle * (static_cast<double>(n_photon - n_prime) + 0.5);
    const double half_diff = 0.5 * (xi - eta);
    const double radical = std::sqrt(std::pow(std::sin(chi) * std::cos(half_diff), 2) +
                                     std::pow(std::cos(chi), 2));
    const double c = concurrence_from_angles(chi, xi, eta);
    const double from_c = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double sin2_half = std::pow(std::sin(0.5 * chi), 2);

    TwoModeSubsystemPhase out;
    out.concurrence_limit = radical < kLimitTol;

    if (out.concurrence_limit) {
        const double linear = solid_angle * std::cos(chi) / 4.0;
        out.value = offset + linear;
        out.angle_form = offset + linear;
        out.concurrence_form = offset + linear;
        return out;
    }

    // Bloch length `radical`, z component cos(chi): weights (1 +/- radical)/2
    // with beta = offset +/- Omega cos(chi) / (4 radical).
    const double y = solid_angle * std::cos(chi) / (4.0 * radical);
    out.value = offset + std::atan2(radical * std::sin(y), std::cos(y));
    out.branch_singular = std::abs(std::cos(y)) < kBranchTol;

    out.angle_form = offset + std::atan(radical * std::tan(y));
    const double y_c = solid_angle * (1.0 - 2.0 * sin2_half) / (4.0 * from_c);
    out.concurrence_form = offset + std::atan(from_c * std::tan(y_c));
    return out;
}

MixedPhaseReport mixed_phase_two_mode_numeric(const ModelParams& p, int label_j,
                                              double theta, int steps) {
    if (label_j < 1 || label_j > 4) {
        throw Error(ErrorKind::InvalidInput, "label_j must be in 1..4");
    }
    if (steps < 2) throw Error(ErrorKind::InvalidInput, "loop needs at least 2 steps");
    const EigenFrame frame = eigenframes(p, 0.0)[label_j - 1];
    const TwoModeState psi = embed_two_mode(frame.amplitudes, p);
    const TwoModeRotation rotation(psi.base_total(), theta);

    MixedPhaseReport report;
    report.loop_steps = steps;

    const Spectrum initial = support(reduce_two_mode_over_particle2(rotation.apply(psi, 0.0)));
    report.weights = initial.weights;
    const std::size_t n_support = initial.weights.size();

    // phi = 0 eigenvectors as particle-1 two-mode states, pulled back through U(theta, 0).
    const TwoModeRotation unrotate(psi.base_total(), -theta);
    std::vector<TwoModeState> references;
    for (const auto& v : initial.vectors) {
        TwoModeState w(psi.base_total(), 2);
        w.amplitudes() = v;
        references.push_back(unrotate.apply(w, 0.0));
    }

    std::vector<WilsonLine> lines(n_support);
    std::vector<Eigen::VectorXcd> previous = initial.vectors;
    for (int k = 0; k <= steps; ++k) {
        const double phi = 2.0 * kPi * k / steps;
        const ReducedState rho = reduce_two_mode_over_particle2(rotation.apply(psi, phi));
        const auto solver = diagonalize(rho);
        check_weights(solver.eigenvalues(), report.weights);
        const auto current = all_vectors(solver);
        const auto assignment = match_by_overlap(previous, current);
        for (std::size_t l = 0; l < n_support; ++l) {
            Eigen::VectorXcd e = current[assignment[l]];
            const Eigen::VectorXcd ref = rotation.apply(references[l], phi).amplitudes();
            const cplx overlap = ref.dot(e);
            if (std::abs(overlap) < kContinuityMin) {
                throw Error(ErrorKind::NumericalFailure,
                            "reduced eigenvector left its rotated reference");
            }
            e *= std::conj(overlap) / std::abs(overlap);
            previous[l] = e;
            lines[l].push(e);
        }
    }

    for (auto& line : lines) report.berry_phases.push_back(line.phase(false));
    report.numeric_phase = combine(report.weights, report.berry_phases);

    report.has_analytic = true;
    report.analytic_phase = gamma_2q_subsystem_analytic(frame.chi, frame.xi, frame.eta,
                                                        p.n_photon, p.n_prime,
                                                        loop_solid_angle(theta))
                                .value;
    report.difference_mod_2pi = wrap_phase(report.analytic_phase - report.numeric_phase);
    return report;
}

} // namespace geophase
