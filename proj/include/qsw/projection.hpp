#pragma once

#include <vector>

#include "qsw/pauli.hpp"

namespace qsw {

/// Single-qubit stabilizer projection: rotate by pre_rotation, project each
/// listed qubit onto the (sector * basis) eigenspace, delete those qubits.
struct ProjectionPlan {
    std::vector<std::size_t> qubit_indices;
    std::vector<int> sectors;   // +1 or -1 per index
    std::vector<char> bases;    // 'X', 'Y' or 'Z' per index
    RotationSequence pre_rotation;

    void validate(std::size_t n_qubits) const;
};

/// H -> Tr_I( P U H U^dagger P ). A term acting as I or the plan basis on
/// every plan qubit survives (coefficient scaled by the sector values where
/// the basis operator acts) with the plan qubits deleted; any term acting
/// with an anticommuting single-qubit operator on a plan qubit is dropped
/// exactly.
PauliSum project(const PauliSum& H, const ProjectionPlan& plan);

/// Frozen-core/virtual projection: identity pre-rotation, basis Z
/// everywhere, sector -1 on occupied and +1 on virtual qubits.
PauliSum freeze_orbitals(const PauliSum& H,
                         const std::vector<std::size_t>& occupied,
                         const std::vector<std::size_t>& virtuals);

/// Indices with orbital energy below -threshold (the frozen core window).
std::vector<std::size_t> core_indices_below(const std::vector<double>& orbital_energies,
                                            double threshold);

}  // namespace qsw
