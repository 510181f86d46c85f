#pragma once

#include <vector>

#include "qsw/pauli.hpp"
#include "qsw/projection.hpp"

namespace qsw {

/// Independent, pairwise commuting Pauli strings that commute with every
/// term of the Hamiltonian, plus the qubit each one is rotated onto.
struct SymmetryBasis {
    std::vector<PauliTerm> generators;      // unit coefficient
    std::vector<std::size_t> pivot_qubits;  // distinct, one per generator

    std::size_t size() const { return generators.size(); }
};

struct SymmetrySector {
    std::vector<int> assignments;  // +1 or -1 per generator
};

/// Z2 symmetries of H: a canonical GF(2) basis (reduced row-echelon form,
/// lexicographically smallest pivot columns over [x|z]) of the largest
/// mutually commuting subgroup of the symplectic kernel of H's terms.
/// Pivot qubits come from the same construction build_clifford uses.
SymmetryBasis find_z2_symmetries(const PauliSum& H);

/// Clifford rotations mapping generator i onto +/- Z at pivot_qubits[i].
/// Rejects bases with non-commuting or dependent members.
RotationSequence build_clifford(const SymmetryBasis& basis);

/// Eigenvalue of each (Z-type) generator on the reference configuration:
/// assignments[i] = (-1)^popcount(z(S_i) & reference_bits). Generators with
/// X/Y content are an error at this layer.
SymmetrySector select_sector(const SymmetryBasis& basis,
                             const BitVec& reference_bits);

/// Rotate H by the Clifford, fix each pivot qubit's Z to the sector
/// eigenvalue, delete the pivots. Every eigenvalue of the result is an
/// eigenvalue of H. Signs produced by the Clifford mapping (S -> -Z) are
/// absorbed so callers always see the +Z convention.
PauliSum taper(const PauliSum& H, const SymmetryBasis& basis,
               const SymmetrySector& sector);

struct SectorScanEntry {
    SymmetrySector sector;
    double ground_energy = 0.0;
};

/// Brute-force audit mode: taper H in every sector and report each ground
/// energy (ascending by energy). Feasible for |basis| <= 12.
std::vector<SectorScanEntry> scan_sectors(const PauliSum& H,
                                          const SymmetryBasis& basis);

namespace detail {

/// Shared Clifford construction: rotations, pivots and the sign each
/// generator picks up (generator i maps to signs[i] * Z at pivots[i]).
struct CliffordConstruction {
    RotationSequence rotations;
    std::vector<std::size_t> pivots;
    std::vector<int> signs;
};

CliffordConstruction clifford_construction(const std::vector<PauliTerm>& generators,
                                           std::size_t n_qubits);

/// GF(2) kernel of the commutation constraints of H's terms, canonical RREF
/// basis over columns [x_0..x_{n-1}, z_0..z_{n-1}].
std::vector<PauliTerm> symmetry_kernel_basis(const PauliSum& H);

/// Canonical RREF basis (same column order) of the span of the given
/// strings; coefficients are discarded.
std::vector<PauliTerm> canonical_generating_set(
    const std::vector<PauliTerm>& terms, std::size_t n_qubits);

/// Expresses target's string as an XOR combination of the RREF basis rows;
/// bit i of the result selects basis[i]. Throws when outside the span.
std::uint64_t solve_generator_subset(const std::vector<PauliTerm>& rref_basis,
                                     const PauliTerm& target);

}  // namespace detail

}  // namespace qsw
