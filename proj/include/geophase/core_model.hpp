// core_model.hpp — parameters, invariant-subspace Hamiltonian, and two-mode Fock-space states
//
// Basis of the four-dimensional invariant subspace (fixed everywhere downstream):
//   0: |e1 e2, n>    1: |e1 g2, n>    2: |g1 e2, n+1>    3: |g1 g2, n+1>
// Index k factorises as (particle1+field qubit) = k / 2, (particle 2) = k % 2,
// with 0 meaning "excited" on both factors.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace geophase {

using cplx = std::complex<double>;

struct ModelParams {
    double omega1{1.0};      // transition frequency of particle 1
    double nu{0.8};          // field-mode frequency
    double lambda{0.5};      // spin-field coupling
    double coupling_J{0.3};  // spin-spin coupling
    double omega2{0.7};      // Zeeman energy mu*B of particle 2
    int n_photon{0};         // field excitation labelling the invariant subspace
    int n_prime{0};          // second-mode photon number

    // Throws Error(InvalidInput) on negative photon numbers or non-finite frequencies.
    void validate() const;
};

struct BlockHamiltonian {
    Eigen::Matrix4cd entries;
    double phi{0.0};
};

double lambda_n(const ModelParams& p);

BlockHamiltonian build_block_hamiltonian(const ModelParams& p, double phi);

// a^dagger a restricted to the invariant subspace: diag(n, n, n+1, n+1).
Eigen::Vector4d number_operator_block(const ModelParams& p);

// <v| N |v> for a block vector v.
double number_expectation(const ModelParams& p, const Eigen::Vector4cd& v);

// State on the truncated two-mode Fock space, restricted to total photon
// numbers N0 = base_total and N0 + 1.  Within each sector the photon index
// runs over n_a = 0..N (n_b = N - n_a); each photon configuration carries
// `inner_dim` internal amplitudes (4 for both spins in the block ordering,
// 2 for particle 1 alone).
class TwoModeState {
public:
    TwoModeState() = default;
    TwoModeState(int base_total, int inner_dim);

    int base_total() const noexcept { return base_total_; }
    int inner_dim() const noexcept { return inner_dim_; }
    Eigen::Index size() const noexcept { return amplitudes_.size(); }

    // Offset of (n_a, n_b) in the flat amplitude vector; -1 if outside the two sectors.
    Eigen::Index offset(int n_a, int n_b) const noexcept;

    cplx amplitude(int n_a, int n_b, int inner) const;
    cplx& amplitude(int n_a, int n_b, int inner);

    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    Eigen::VectorXcd& amplitudes() noexcept { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }

    // Probability weight in total-photon sector N (0 when N is not represented).
    double sector_population(int total) const;

    // <J_z> = <(n_a - n_b)/2>.
    double jz_expectation() const;

    // Enumerates (n_a, n_b) pairs in storage order.
    std::vector<std::array<int, 2>> photon_configurations() const;

private:
    int base_total_{0};
    int inner_dim_{4};
    Eigen::VectorXcd amplitudes_;
};

// |psi> (block amplitudes) tensored with |n'> of the second mode.
TwoModeState embed_two_mode(const Eigen::Vector4cd& block_state, const ModelParams& p);

// U(theta, phi) = exp(-i phi J_z) exp(-i theta J_y), J_z = (a'a - b'b)/2,
// J_y = (a'b - a b')/(2i).  The theta factor is exponentiated once per
// sector; apply() then only costs the diagonal J_z phases.
class TwoModeRotation {
public:
    TwoModeRotation(int base_total, double theta);

    double theta() const noexcept { return theta_; }

    TwoModeState apply(const TwoModeState& state, double phi) const;

    // exp(-i theta J_y) on sector `total` in the n_a = 0..N basis.
    const Eigen::MatrixXcd& sector_matrix(int total) const;

private:
    int base_total_;
    double theta_;
    std::array<Eigen::MatrixXcd, 2> sector_exp_;
};

TwoModeState two_mode_rotation(const TwoModeState& state, double theta, double phi);

// J_y in the n_a = 0..N basis of sector N.
Eigen::MatrixXcd jy_sector(int total);

} // namespace geophase
