#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsw/pauli.hpp"

namespace qsw {

/// Default cap for dense diagonalization; override with the
/// QSW_DENSE_QUBIT_CAP environment variable.
std::size_t dense_qubit_cap();

enum class SpectrumMethod { dense, iterative };

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    std::vector<cplx> ground_vector;  // empty when not requested/kept
    SpectrumMethod method = SpectrumMethod::dense;
    double gap = 0.0;  // eigenvalues[1] - eigenvalues[0] when available
};

struct GroundStateResult {
    double energy = 0.0;
    std::vector<cplx> amplitudes;
    double residual = 0.0;  // ||H v - E v||
    bool converged = false;
    double gap = 0.0;  // to the next Ritz value
    std::size_t iterations = 0;
};

struct LanczosOptions {
    std::size_t krylov_dim = 48;
    std::size_t max_restarts = 80;
    double residual_tol = 1e-9;
    std::uint64_t start_seed = 0x51ab0c257e1f00ddull;
    std::optional<std::uint64_t> reference_index;  // start-vector spike
};

/// Matrix-free action out = H * in over the computational basis
/// (index bit q = qubit q). Requires n_qubits <= 24 by default sizing.
void apply_pauli_sum(const PauliSum& H, std::span<const cplx> in,
                     std::span<cplx> out);

std::vector<cplx> apply_pauli_sum(const PauliSum& H,
                                  const std::vector<cplx>& v);

/// Full spectrum of the Hermitian matrix of H. Errors when the qubit count
/// exceeds dense_qubit_cap() or H is not Hermitian.
SpectrumResult dense_spectrum(const PauliSum& H, bool want_ground_vector = false);

/// Lowest eigenpair via restarted Lanczos with full reorthogonalization and
/// a deterministic start vector. Non-convergence is reported through
/// `converged`/`residual`, not thrown.
GroundStateResult ground_state(const PauliSum& H,
                               const LanczosOptions& opts = {});

}  // namespace qsw
