// phases.cpp

#include "geophase/phases.hpp"
#include "geophase/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace geophase {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_normalized(const Eigen::VectorXcd& state) {
    if (std::abs(state.norm() - 1.0) > kNormTol) {
        throw Error(ErrorKind::InvalidInput, "Wilson loop state not normalized");
    }
}

double link_arg(const Eigen::VectorXcd& from, const Eigen::VectorXcd& to) {
    const cplx overlap = from.dot(to);
    if (std::abs(overlap) < kNullOverlap) {
        throw Error(ErrorKind::NullOverlap,
                    "neighbouring overlap " + std::to_string(std::abs(overlap)));
    }
    return std::arg(overlap);
}

void finish_report(PhaseReport& r) {
    r.difference_mod_2pi = wrap_phase(r.analytic_phase - r.numeric_phase);
}

const EigenFrame& frame_for(const std::array<EigenFrame, 4>& frames, int label_j) {
    if (label_j < 1 || label_j > 4) {
        throw Error(ErrorKind::InvalidInput, "label_j must be in 1..4");
    }
    return frames[label_j - 1];
}

} // namespace

double wrap_phase(double x) noexcept {
    double r = std::remainder(x, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

double phase_distance(double a, double b) noexcept {
    return std::abs(wrap_phase(a - b));
}

void WilsonLine::push(const Eigen::VectorXcd& state) {
    check_normalized(state);
    if (count_ == 0) {
        first_ = state;
    } else {
        if (state.size() != last_.size()) {
            throw Error(ErrorKind::InvalidInput, "Wilson loop states differ in dimension");
        }
        arg_sum_ += link_arg(last_, state);
    }
    last_ = state;
    ++count_;
}

double WilsonLine::phase(bool closed) const {
    if (count_ < 3) {
        throw Error(ErrorKind::InvalidInput, "Wilson loop needs at least 3 states");
    }
    double total = arg_sum_;
    if (closed) total += link_arg(last_, first_);
    return wrap_phase(-total);
}

double wilson_loop_phase(std::span<const Eigen::VectorXcd> states, bool closed) {
    WilsonLine line;
    for (const auto& s : states) line.push(s);
    return line.phase(closed);
}

double solid_angle_fixed_latitude(double x) noexcept {
    return kTwoPi * (1.0 - std::cos(x));
}

double loop_solid_angle(double theta) noexcept {
    return solid_angle_fixed_latitude(theta);
}

double berry_magnetic_analytic(double chi, double xi, double eta) noexcept {
    const double s2 = std::pow(std::sin(0.5 * chi), 2);
    const double c2 = std::pow(std::cos(0.5 * chi), 2);
    return 0.5 * (s2 * solid_angle_fixed_latitude(eta) + c2 * solid_angle_fixed_latitude(xi));
}

double berry_magnetic_from_trace(const LoopTrace& trace) {
    WilsonLine line;
    for (const auto& sample : trace.samples) line.push(sample.frame.amplitudes);
    return line.phase(true);
}

std::array<PhaseReport, 4> berry_magnetic_all_levels(const ModelParams& p, int steps) {
    return berry_magnetic_from_traces(p, track_all_levels(p, steps));
}

std::array<PhaseReport, 4> berry_magnetic_from_traces(const ModelParams& p,
                                                      const std::array<LoopTrace, 4>& traces) {
    const int steps = static_cast<int>(traces[0].samples.size());
    const int half = steps / 2;
    std::array<double, 4> halved{};
    bool have_half = half >= 16;
    if (have_half) {
        const auto coarse = track_all_levels(p, half);
        for (int j = 0; j < 4; ++j) halved[j] = berry_magnetic_from_trace(coarse[j]);
    }

    std::array<PhaseReport, 4> reports;
    for (int j = 0; j < 4; ++j) {
        const EigenFrame& start = traces[j].samples.front().frame;
        PhaseReport& r = reports[j];
        r.loop_steps = steps;
        r.numeric_phase = berry_magnetic_from_trace(traces[j]);
        r.analytic_phase = berry_magnetic_analytic(start.chi, start.xi, start.eta);
        r.halved_numeric_phase = halved[j];
        r.converged = have_half && phase_distance(r.numeric_phase, halved[j]) < kConvergenceTol;
        finish_report(r);
    }
    return reports;
}

PhaseReport berry_magnetic_numeric(const ModelParams& p, int label_j, int steps) {
    if (label_j < 1 || label_j > 4) {
        throw Error(ErrorKind::InvalidInput, "label_j must be in 1..4");
    }
    return berry_magnetic_all_levels(p, steps)[label_j - 1];
}

double berry_quantized_analytic(double chi, int n_photon) noexcept {
    return std::numbers::pi * (1.0 - std::cos(chi)) + kTwoPi * n_photon;
}

double quantized_loop_phase(const ModelParams& p, const Eigen::Vector4cd& state, int steps) {
    if (steps < 3) throw Error(ErrorKind::InvalidInput, "loop needs at least 3 steps");
    const Eigen::Vector4d number = number_operator_block(p);
    WilsonLine line;
    Eigen::VectorXcd shifted(4);
    for (int k = 0; k < steps; ++k) {
        const double phi = kTwoPi * k / steps;
        for (int i = 0; i < 4; ++i) shifted(i) = std::polar(1.0, -phi * number(i)) * state(i);
        line.push(shifted);
    }
    return line.phase(true);
}

PhaseReport berry_quantized_numeric(const ModelParams& p, int label_j, int steps) {
    const EigenFrame& f = frame_for(eigenframes(p, 0.0), label_j);
    PhaseReport r;
    r.loop_steps = steps;
    r.numeric_phase = quantized_loop_phase(p, f.amplitudes, steps);
    r.analytic_phase = berry_quantized_analytic(f.chi, p.n_photon);
    if (steps / 2 >= 3) {
        r.halved_numeric_phase = quantized_loop_phase(p, f.amplitudes, steps / 2);
        r.converged = phase_distance(r.numeric_phase, r.halved_numeric_phase) < kConvergenceTol;
    }
    finish_report(r);
    return r;
}

double two_mode_berry_analytic(double chi, int n_photon, int n_prime, double solid_angle) noexcept {
    const double s2 = std::pow(std::sin(0.5 * chi), 2);
    return -0.5 * solid_angle * (static_cast<double>(n_photon - n_prime) + s2);
}

double two_mode_loop_phase(const TwoModeState& state, double theta, int steps) {
    if (steps < 2) throw Error(ErrorKind::InvalidInput, "loop needs at least 2 steps");
    const TwoModeRotation rotation(state.base_total(), theta);
    WilsonLine line;
    for (int k = 0; k <= steps; ++k) {
        line.push(rotation.apply(state, kTwoPi * k / steps).amplitudes());
    }
    return line.phase(false);
}

PhaseReport two_mode_berry_numeric(const ModelParams& p, int label_j, double theta, int steps) {
    const EigenFrame& f = frame_for(eigenframes(p, 0.0), label_j);
    const TwoModeState state = embed_two_mode(f.amplitudes, p);
    PhaseReport r;
    r.loop_steps = steps;
    r.numeric_phase = two_mode_loop_phase(state, theta, steps);
    r.analytic_phase = two_mode_berry_analytic(f.chi, p.n_photon, p.n_prime, loop_solid_angle(theta));
    if (steps / 2 >= 2) {
        r.halved_numeric_phase = two_mode_loop_phase(state, theta, steps / 2);
        r.converged = phase_distance(r.numeric_phase, r.halved_numeric_phase) < kConvergenceTol;
    }
    finish_report(r);
    return r;
}

} // namespace geophase
