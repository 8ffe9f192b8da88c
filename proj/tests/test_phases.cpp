#include <doctest.h>

#include "oracles.hpp"

#include "geophase/errors.hpp"
#include "geophase/phases.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace geophase;
using oracle::cplx;
using oracle::pi;

namespace {

ModelParams generic() {
    ModelParams p;
    p.omega1 = 1.0;
    p.nu = 0.8;
    p.lambda = 0.5;
    p.coupling_J = 0.3;
    p.omega2 = 0.7;
    return p;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no geophase::Error thrown");
    return ErrorKind::NumericalFailure;
}

// Eigenvector of H(phi) obtained from the phi = 0 one through the diagonal
// similarity H(phi) = D H(0) D^dagger, D = diag(e^{-i phi}, 1, e^{-i phi}, 1).
Eigen::VectorXcd transported(const Eigen::Vector4cd& v0, double phi) {
    const cplx d = std::polar(1.0, -phi);
    return Eigen::Vector4cd(d * v0(0), v0(1), d * v0(2), v0(3));
}

std::vector<Eigen::VectorXcd> qubit_loop(double theta, int steps) {
    std::vector<Eigen::VectorXcd> out;
    for (int k = 0; k < steps; ++k) {
        const double phi = 2 * pi * k / steps;
        out.push_back(Eigen::Vector2cd(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)));
    }
    return out;
}

} // namespace

TEST_CASE("wrap_phase and phase_distance") {
    CHECK(wrap_phase(0.0) == 0.0);
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3 * pi) == doctest::Approx(pi));
    CHECK(wrap_phase(4 * pi + 0.1) == doctest::Approx(0.1));
    CHECK(wrap_phase(-0.1 - 2 * pi) == doctest::Approx(-0.1));
    CHECK(phase_distance(pi - 1e-3, -pi + 1e-3) == doctest::Approx(2e-3));
    CHECK(phase_distance(4 * pi, 0.0) < 1e-14);
}

TEST_CASE("wilson_loop_phase") {
    SUBCASE("constant states") {
        std::mt19937_64 rng(4);
        const Eigen::VectorXcd v = oracle::random_unit(rng, 5);
        const std::vector<Eigen::VectorXcd> same(20, v);
        CHECK(std::abs(wilson_loop_phase(same, true)) < 1e-15);
        CHECK(std::abs(wilson_loop_phase(same, false)) < 1e-15);
    }
    SUBCASE("qubit on the equator encloses half the sphere") {
        const auto states = qubit_loop(pi / 2, 512);
        CHECK(oracle::dist_mod_2pi(wilson_loop_phase(states, true), -pi) < 1e-4);
        CHECK(std::abs(wilson_loop_phase(states, true) - oracle::product_phase(states, true)) < 1e-12);
    }
    SUBCASE("qubit at other latitudes") {
        for (double theta : {0.3, 1.0, 2.2}) {
            const auto states = qubit_loop(theta, 4096);
            // -(1/2) * solid angle 2 pi (1 - cos theta) for a spin-1/2 following the field
            CHECK(oracle::dist_mod_2pi(wilson_loop_phase(states, true), -pi * (1 - std::cos(theta))) < 1e-5);
        }
    }
    SUBCASE("gauge invariance under random per-state phases") {
        std::mt19937_64 rng(1234);
        std::uniform_real_distribution<double> u(0.0, 2 * pi);
        const auto tr = track_loop(generic(), 2, 64);
        std::vector<Eigen::VectorXcd> states;
        for (const auto& s : tr.samples) states.push_back(s.frame.amplitudes);
        const double ref = wilson_loop_phase(states, true);
        for (int trial = 0; trial < 200; ++trial) {
            auto fuzzed = states;
            for (auto& s : fuzzed) s *= std::polar(1.0, u(rng));
            CHECK(oracle::dist_mod_2pi(wilson_loop_phase(fuzzed, true), ref) < 1e-12);
        }
    }
    SUBCASE("open path endpoints carry gauge") {
        const auto states = qubit_loop(pi / 2, 64);
        auto shifted = states;
        shifted.back() *= std::polar(1.0, 0.5);
        CHECK(oracle::dist_mod_2pi(wilson_loop_phase(shifted, false), wilson_loop_phase(states, false) - 0.5) < 1e-12);
        CHECK(oracle::dist_mod_2pi(wilson_loop_phase(shifted, true), wilson_loop_phase(states, true)) < 1e-12);
    }
    SUBCASE("errors") {
        const std::vector<Eigen::VectorXcd> orth{Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1),
                                                 Eigen::Vector2cd(1, 0)};
        CHECK(kind_of([&] { wilson_loop_phase(orth, true); }) == ErrorKind::NullOverlap);
        const std::vector<Eigen::VectorXcd> two{Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 0)};
        CHECK(kind_of([&] { wilson_loop_phase(two, true); }) == ErrorKind::InvalidInput);
        const std::vector<Eigen::VectorXcd> unnorm{Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1.1, 0),
                                                   Eigen::Vector2cd(1, 0)};
        CHECK(kind_of([&] { wilson_loop_phase(unnorm, true); }) == ErrorKind::InvalidInput);
        const std::vector<Eigen::VectorXcd> mixed{Eigen::Vector2cd(1, 0), Eigen::Vector3cd(1, 0, 0),
                                                  Eigen::Vector2cd(1, 0)};
        CHECK(kind_of([&] { wilson_loop_phase(mixed, true); }) == ErrorKind::InvalidInput);
        WilsonLine line;
        CHECK(line.size() == 0);
        CHECK(kind_of([&] { (void)line.phase(false); }) == ErrorKind::InvalidInput);
    }
}

TEST_CASE("solid angles") {
    CHECK(solid_angle_fixed_latitude(0.0) == 0.0);
    CHECK(solid_angle_fixed_latitude(pi / 2) == doctest::Approx(2 * pi));
    CHECK(solid_angle_fixed_latitude(pi) == doctest::Approx(4 * pi));
    CHECK(loop_solid_angle(1.2) == solid_angle_fixed_latitude(1.2));
}

TEST_CASE("magnetic Berry phase closed form") {
    CHECK(berry_magnetic_analytic(0.0, 1.3, 0.4) == doctest::Approx(pi * (1 - std::cos(1.3))));
    CHECK(berry_magnetic_analytic(pi, 0.9, pi / 2) == doctest::Approx(pi));
    // weight of the upper and lower blocks
    const double chi = 1.1, xi = 0.7, eta = -2.5;
    const Eigen::Vector4cd c = amplitudes_from_angles(chi, xi, eta, 0.0);
    CHECK(berry_magnetic_analytic(chi, xi, eta) ==
          doctest::Approx(2 * pi * (std::norm(c(0)) + std::norm(c(2)))).epsilon(1e-14));
}

TEST_CASE("magnetic Berry phase numeric") {
    SUBCASE("generic point, all levels") {
        const auto reports = berry_magnetic_all_levels(generic(), 4096);
        const auto frames = eigenframes(generic(), 0.0);
        for (int j = 0; j < 4; ++j) {
            const auto& r = reports[j];
            CHECK(r.loop_steps == 4096);
            CHECK(r.converged);
            CHECK(std::abs(r.difference_mod_2pi) < 1e-6);
            // independent route: transport the phi = 0 eigenvector by the diagonal similarity
            std::vector<Eigen::VectorXcd> states;
            for (int k = 0; k < 4096; ++k) states.push_back(transported(frames[j].amplitudes, 2 * pi * k / 4096));
            CHECK(oracle::dist_mod_2pi(r.numeric_phase, oracle::product_phase(states, true)) < 1e-10);
            const Eigen::Vector4cd& c = frames[j].amplitudes;
            CHECK(oracle::dist_mod_2pi(r.numeric_phase, 2 * pi * (std::norm(c(0)) + std::norm(c(2)))) < 1e-6);
        }
        CHECK(berry_magnetic_numeric(generic(), 1, 4096).numeric_phase == reports[0].numeric_phase);
    }
    SUBCASE("B = 0") {
        ModelParams p = generic();
        p.omega2 = 0.0;
        for (const auto& r : berry_magnetic_all_levels(p, 1024)) {
            CHECK(std::abs(r.numeric_phase) < 1e-8);
            CHECK(std::abs(r.difference_mod_2pi) < 1e-8);
        }
    }
    SUBCASE("strong spin-field coupling") {
        ModelParams p = generic();
        p.lambda = 1e6;
        for (const auto& r : berry_magnetic_all_levels(p, 1024)) CHECK(phase_distance(r.numeric_phase, pi) < 1e-3);
    }
    SUBCASE("strong spin-spin coupling") {
        ModelParams p = generic();
        p.coupling_J = 1e6;
        for (const auto& r : berry_magnetic_all_levels(p, 1024)) CHECK(phase_distance(r.numeric_phase, 0.0) < 1e-3);
    }
    SUBCASE("errors") {
        CHECK(kind_of([&] { berry_magnetic_numeric(generic(), 0, 64); }) == ErrorKind::InvalidInput);
        CHECK(kind_of([&] { berry_magnetic_numeric(generic(), 1, 8); }) == ErrorKind::InvalidInput);
    }
}

TEST_CASE("quantized-field phase") {
    CHECK(berry_quantized_analytic(0.0, 0) == 0.0);
    CHECK(berry_quantized_analytic(pi, 1) == doctest::Approx(4 * pi));

    SUBCASE("number eigenstate") {
        ModelParams p = generic();
        CHECK(std::abs(quantized_loop_phase(p, Eigen::Vector4cd(1, 0, 0, 0), 64)) < 1e-14);
        p.lambda = p.coupling_J = p.omega2 = 0.0;
        CHECK(kind_of([&] { berry_quantized_numeric(p, 1, 64); }) == ErrorKind::DegeneracyEncountered);
    }
    SUBCASE("equals 2 pi <N>") {
        std::mt19937_64 rng(77);
        for (int t = 0; t < 20; ++t) {
            const auto d = oracle::random_draw(rng);
            ModelParams p;
            p.omega1 = d.omega1;
            p.nu = d.nu;
            p.lambda = d.lambda;
            p.coupling_J = d.J;
            p.omega2 = d.omega2;
            p.n_photon = d.n;
            const auto frames = eigenframes(p, 0.0);
            for (int j = 1; j <= 4; ++j) {
                const auto r = berry_quantized_numeric(p, j, 65536);
                const double n_exp = number_expectation(p, frames[j - 1].amplitudes);
                CHECK(phase_distance(r.numeric_phase, 2 * pi * n_exp) < 1e-8);
                CHECK(std::abs(r.difference_mod_2pi) < 1e-8);
                CHECK(r.converged);
            }
        }
    }
    SUBCASE("vacuum still contributes") {
        const auto r = berry_quantized_numeric(generic(), 2, 4096);
        const auto f = eigenframes(generic(), 0.0)[1];
        CHECK(std::abs(wrap_phase(r.numeric_phase)) > 1e-3);
        CHECK(phase_distance(r.numeric_phase, pi * (1 - std::cos(f.chi))) < 1e-6);
    }
    SUBCASE("no classical field: independent of the field azimuth") {
        ModelParams p = generic();
        p.omega2 = 0.0;
        const auto r = berry_quantized_numeric(p, 3, 4096);
        const auto f = eigenframes(p, 1.7)[2];
        CHECK(phase_distance(r.numeric_phase, quantized_loop_phase(p, f.amplitudes, 4096)) < 1e-12);
    }
    SUBCASE("brute-force product") {
        const ModelParams p = generic();
        const auto f = eigenframes(p, 0.0)[0];
        std::vector<Eigen::VectorXcd> states;
        for (int k = 0; k < 300; ++k) {
            const double phi = 2 * pi * k / 300;
            states.push_back(Eigen::Vector4cd(f.amplitudes(0), f.amplitudes(1),
                                              std::polar(1.0, -phi) * f.amplitudes(2),
                                              std::polar(1.0, -phi) * f.amplitudes(3)));
        }
        CHECK(oracle::dist_mod_2pi(quantized_loop_phase(p, f.amplitudes, 300),
                                   oracle::product_phase(states, true)) < 1e-12);
        CHECK(kind_of([&] { quantized_loop_phase(p, f.amplitudes, 2); }) == ErrorKind::InvalidInput);
    }
}

TEST_CASE("two-mode phase closed form") {
    CHECK(two_mode_berry_analytic(1.0, 2, 1, 0.0) == 0.0);
    CHECK(two_mode_berry_analytic(0.0, 1, 1, 3.0) == 0.0);
    CHECK(two_mode_berry_analytic(pi / 2, 1, 0, 2 * pi) == doctest::Approx(-1.5 * pi));
    const double a = two_mode_berry_analytic(0.8, 2, 0, 1.0);
    CHECK(two_mode_berry_analytic(0.8, 2, 0, 2.5) == doctest::Approx(2.5 * a));
}

TEST_CASE("two-mode phase numeric") {
    SUBCASE("uncoupled upper level at theta = 0") {
        ModelParams p = generic();
        p.lambda = 0.0;
        p.omega2 = 0.0;
        const auto f = eigenframes(p, 0.0)[3];
        CHECK(std::abs(std::abs(f.amplitudes(0)) - 1.0) < 1e-14);
        CHECK(std::abs(two_mode_berry_numeric(p, 4, 0.0, 256).numeric_phase) < 1e-12);
    }
    SUBCASE("theta = 0 is 2 pi <J_z>") {
        for (auto [n, np] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 2}, std::pair{2, 1}}) {
            ModelParams p = generic();
            p.n_photon = n;
            p.n_prime = np;
            for (int j = 1; j <= 4; ++j) {
                const auto f = eigenframes(p, 0.0)[j - 1];
                const double s = std::sin(f.chi / 2);
                const double jz = 0.5 * ((n - np) + s * s);
                const auto r = two_mode_berry_numeric(p, j, 0.0, 65536);
                CHECK(phase_distance(r.numeric_phase, 2 * pi * jz) < 1e-8);
                CHECK(embed_two_mode(f.amplitudes, p).jz_expectation() == doctest::Approx(jz).epsilon(1e-12));
            }
        }
    }
    SUBCASE("generic theta against a dense exponential") {
        ModelParams p = generic();
        p.n_photon = 1;
        p.n_prime = 1;
        const double theta = 1.0;
        const auto f = eigenframes(p, 0.0)[1];
        const TwoModeState s = embed_two_mode(f.amplitudes, p);
        const int base = s.base_total();
        // exp(-i theta J_y) per sector from the Taylor series, then J_z phases
        std::array<Eigen::MatrixXcd, 2> ey;
        for (int q = 0; q < 2; ++q) ey[q] = oracle::taylor_expm(cplx(0, -theta) * jy_sector(base + q));
        const int steps = 512;
        std::vector<Eigen::VectorXcd> states;
        for (int k = 0; k <= steps; ++k) {
            const double phi = 2 * pi * k / steps;
            TwoModeState out(base, 4);
            for (int q = 0; q < 2; ++q) {
                const int total = base + q;
                for (int i = 0; i <= total; ++i)
                    for (int m = 0; m <= total; ++m)
                        for (int in = 0; in < 4; ++in)
                            out.amplitude(i, total - i, in) +=
                                std::polar(1.0, -phi * (i - 0.5 * total)) * ey[q](i, m) * s.amplitude(m, total - m, in);
            }
            states.push_back(out.amplitudes());
        }
        const auto r = two_mode_berry_numeric(p, 2, theta, steps);
        CHECK(oracle::dist_mod_2pi(r.numeric_phase, oracle::product_phase(states, false)) < 1e-10);
        // the connection integrates to 2 pi cos(theta) <J_z>
        CHECK(phase_distance(two_mode_berry_numeric(p, 2, theta, 8192).numeric_phase,
                             2 * pi * std::cos(theta) * s.jz_expectation()) < 1e-6);
        CHECK(r.analytic_phase == doctest::Approx(two_mode_berry_analytic(f.chi, 1, 1, loop_solid_angle(theta))));
    }
    SUBCASE("errors") {
        TwoModeState s(0, 4);
        s.amplitude(0, 0, 0) = 1.0;
        CHECK(kind_of([&] { two_mode_loop_phase(s, 0.3, 1); }) == ErrorKind::InvalidInput);
        CHECK(kind_of([&] { two_mode_berry_numeric(generic(), 7, 0.3, 64); }) == ErrorKind::InvalidInput);
    }
}
