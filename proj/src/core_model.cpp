// core_model.cpp — Hamiltonian block and two-mode Fock-space machinery

#include "geophase/core_model.hpp"
#include "geophase/errors.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace geophase {

void ModelParams::validate() const {
    if (n_photon < 0 || n_prime < 0) {
        throw Error(ErrorKind::InvalidInput, "photon numbers must be nonnegative");
    }
    for (double v : {omega1, nu, lambda, coupling_J, omega2}) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidInput, "model parameters must be finite");
        }
    }
}

double lambda_n(const ModelParams& p) {
    return p.lambda * std::sqrt(static_cast<double>(p.n_photon) + 1.0);
}

BlockHamiltonian build_block_hamiltonian(const ModelParams& p, double phi) {
    const double n = p.n_photon;
    const double J = p.coupling_J;
    const double g = lambda_n(p);
    const cplx zeeman = 0.5 * p.omega2 * std::polar(1.0, -phi);

    BlockHamiltonian h;
    h.phi = phi;
    h.entries.setZero();
    h.entries(0, 0) = J + n * p.nu + 0.5 * p.omega1;
    h.entries(1, 1) = -J + n * p.nu + 0.5 * p.omega1;
    h.entries(2, 2) = -J + (n + 1.0) * p.nu - 0.5 * p.omega1;
    h.entries(3, 3) = J + (n + 1.0) * p.nu - 0.5 * p.omega1;

    h.entries(0, 1) = zeeman;
    h.entries(2, 3) = zeeman;
    h.entries(0, 2) = g;
    h.entries(1, 3) = g;

    // Hermitian completion
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            h.entries(j, i) = std::conj(h.entries(i, j));
        }
    }
    return h;
}

Eigen::Vector4d number_operator_block(const ModelParams& p) {
    const double n = p.n_photon;
    return Eigen::Vector4d(n, n, n + 1.0, n + 1.0);
}

double number_expectation(const ModelParams& p, const Eigen::Vector4cd& v) {
    return number_operator_block(p).dot(v.cwiseAbs2());
}

// ------------------------------- two-mode state ------------------------------

TwoModeState::TwoModeState(int base_total, int inner_dim)
    : base_total_(base_total), inner_dim_(inner_dim) {
    if (base_total < 0 || inner_dim <= 0) {
        throw Error(ErrorKind::InvalidInput, "TwoModeState: bad dimensions");
    }
    const Eigen::Index configs = (base_total + 1) + (base_total + 2);
    amplitudes_ = Eigen::VectorXcd::Zero(configs * inner_dim);
}

Eigen::Index TwoModeState::offset(int n_a, int n_b) const noexcept {
    if (n_a < 0 || n_b < 0) return -1;
    const int total = n_a + n_b;
    if (total == base_total_) return static_cast<Eigen::Index>(n_a) * inner_dim_;
    if (total == base_total_ + 1) {
        return static_cast<Eigen::Index>(base_total_ + 1 + n_a) * inner_dim_;
    }
    return -1;
}

cplx TwoModeState::amplitude(int n_a, int n_b, int inner) const {
    const Eigen::Index off = offset(n_a, n_b);
    if (off < 0 || inner < 0 || inner >= inner_dim_) return cplx{0.0, 0.0};
    return amplitudes_(off + inner);
}

cplx& TwoModeState::amplitude(int n_a, int n_b, int inner) {
    const Eigen::Index off = offset(n_a, n_b);
    if (off < 0 || inner < 0 || inner >= inner_dim_) {
        throw Error(ErrorKind::InvalidInput,
                    "TwoModeState: (" + std::to_string(n_a) + "," + std::to_string(n_b) +
                        ") outside truncation");
    }
    return amplitudes_(off + inner);
}

double TwoModeState::sector_population(int total) const {
    if (total != base_total_ && total != base_total_ + 1) return 0.0;
    const Eigen::Index start = offset(0, total);
    return amplitudes_.segment(start, static_cast<Eigen::Index>(total + 1) * inner_dim_)
        .squaredNorm();
}

double TwoModeState::jz_expectation() const {
    double jz = 0.0;
    for (const auto& [n_a, n_b] : photon_configurations()) {
        const double weight = amplitudes_.segment(offset(n_a, n_b), inner_dim_).squaredNorm();
        jz += 0.5 * (n_a - n_b) * weight;
    }
    return jz;
}

std::vector<std::array<int, 2>> TwoModeState::photon_configurations() const {
    std::vector<std::array<int, 2>> out;
    for (int total : {base_total_, base_total_ + 1}) {
        for (int n_a = 0; n_a <= total; ++n_a) out.push_back({n_a, total - n_a});
    }
    return out;
}

TwoModeState embed_two_mode(const Eigen::Vector4cd& block_state, const ModelParams& p) {
    p.validate();
    TwoModeState state(p.n_photon + p.n_prime, 4);
    for (int k = 0; k < 4; ++k) {
        const int n_a = k < 2 ? p.n_photon : p.n_photon + 1;
        assert(state.offset(n_a, p.n_prime) >= 0);
        state.amplitude(n_a, p.n_prime, k) = block_state(k);
    }
    return state;
}

Eigen::MatrixXcd jy_sector(int total) {
    const int dim = total + 1;
    Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(dim, dim);
    // a'b |n_a, N - n_a> = sqrt((n_a + 1)(N - n_a)) |n_a + 1, N - n_a - 1>
    for (int n_a = 0; n_a < total; ++n_a) {
        const double m = std::sqrt(static_cast<double>(n_a + 1) * (total - n_a));
        jy(n_a + 1, n_a) = cplx(0.0, -0.5 * m);
        jy(n_a, n_a + 1) = cplx(0.0, 0.5 * m);
    }
    return jy;
}

TwoModeRotation::TwoModeRotation(int base_total, double theta)
    : base_total_(base_total), theta_(theta) {
    for (int s = 0; s < 2; ++s) {
        const int total = base_total + s;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(jy_sector(total));
        const Eigen::VectorXcd phases =
            (solver.eigenvalues().cast<cplx>() * cplx(0.0, -theta)).array().exp().matrix();
        sector_exp_[s] =
            solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    }
}

const Eigen::MatrixXcd& TwoModeRotation::sector_matrix(int total) const {
    if (total != base_total_ && total != base_total_ + 1) {
        throw Error(ErrorKind::InvalidInput, "TwoModeRotation: sector not represented");
    }
    return sector_exp_[total - base_total_];
}

TwoModeState TwoModeRotation::apply(const TwoModeState& state, double phi) const {
    if (state.base_total() != base_total_) {
        throw Error(ErrorKind::InvalidInput, "TwoModeRotation: sector mismatch");
    }
    const int inner = state.inner_dim();
    TwoModeState out(base_total_, inner);
    for (int s = 0; s < 2; ++s) {
        const int total = base_total_ + s;
        const Eigen::Index start = state.offset(0, total);
        const Eigen::Index rows = total + 1;
        // photon index along rows, internal index along columns
        using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const Eigen::Map<const RowMajor> in(state.amplitudes().data() + start, rows, inner);
        Eigen::Map<RowMajor> dst(out.amplitudes().data() + start, rows, inner);
        dst.noalias() = sector_exp_[s] * in;
        for (int n_a = 0; n_a <= total; ++n_a) {
            const double jz = 0.5 * (2 * n_a - total);
            dst.row(n_a) *= std::polar(1.0, -phi * jz);
        }
    }
    return out;
}

TwoModeState two_mode_rotation(const TwoModeState& state, double theta, double phi) {
    return TwoModeRotation(state.base_total(), theta).apply(state, phi);
}

} // namespace geophase
