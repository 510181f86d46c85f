#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qsw/pauli.hpp"
#include "qsw/tapering.hpp"

namespace qsw {

/// Commutation structure of a term set: the universally commuting strings
/// (symmetry component) plus the remaining strings grouped into cliques.
/// The set is noncontextual iff every clique is internally commuting and
/// members of different cliques pairwise anticommute.
struct CommutationStructure {
    std::vector<PauliTerm> symmetry_component;       // unit coefficients
    std::vector<std::vector<PauliTerm>> cliques;     // sorted support-major
    bool noncontextual = false;
};

CommutationStructure analyze_commutation_structure(
    const std::vector<PauliTerm>& terms);

bool is_noncontextual(const std::vector<PauliTerm>& terms);

enum class PartitionStrategy {
    greedy_by_magnitude,  // admit in descending |coefficient| order
};

/// Splits H into a noncontextual part and a contextual residual;
/// H_nc + H_context = H exactly and is_noncontextual(H_nc) holds.
std::pair<PauliSum, PauliSum> partition_noncontextual(
    const PauliSum& H,
    PartitionStrategy strategy = PartitionStrategy::greedy_by_magnitude);

/// Noncontextual Hamiltonian decomposed as
///   H_nc = sum_P ( h_P + sum_k h_{P,k} C_k ) P
/// with P running over products of the symmetry generators and C_k the
/// pairwise anticommuting clique representatives.
struct NoncontextualModel {
    struct Component {
        BitVec x, z;                  // the string P (unit coefficient)
        std::uint64_t generator_mask; // subset of generators with prod = sign*P
        int sign = 1;                 // product sign of that generator subset
        double h_sym = 0.0;           // h_P
        std::vector<double> h_clique; // h_{P,k}, length n_cliques
    };

    std::size_t n_qubits = 0;
    std::vector<PauliTerm> symmetry_generators;  // canonical RREF basis
    std::vector<PauliTerm> clique_reps;          // C_k
    std::vector<Component> components;

    std::size_t n_cliques() const { return clique_reps.size(); }
    std::size_t n_generators() const { return symmetry_generators.size(); }

    /// Re-expansion of the structure above; reproduces the modeled sum
    /// exactly.
    PauliSum reconstruct(double drop_tolerance = kDefaultDropTolerance) const;
};

NoncontextualModel build_model(const PauliSum& H_nc);

struct NoncontextualSolution {
    std::vector<int> nu;    // +1/-1 per generator
    std::vector<double> r;  // unit vector, one entry per clique (empty if none)
    double energy = 0.0;
    bool exact = false;     // exhaustive nu search vs greedy descent
};

/// Classical objective eta(nu, r) encoding the noncontextual spectrum.
double objective(const NoncontextualModel& model, const std::vector<int>& nu,
                 const std::vector<double>& r);

/// Minimizes the objective. At fixed nu the r optimum is closed-form
/// (the objective is affine in r), so only nu is searched: exhaustively for
/// up to 16 generators, by seeded greedy bit-flip descent with restarts
/// beyond.
NoncontextualSolution optimize(const NoncontextualModel& model);

/// Rotations mapping A = sum_k r_k C_k onto +/- C_1; K-1 entries.
RotationSequence seqrot_rotations(const NoncontextualModel& model,
                                  const NoncontextualSolution& solution);

/// Applies the clique rotation, then the tapering-style Clifford for the
/// chosen generators, then projects those generators in the sectors fixed
/// by solution.nu. chosen_generators are indices into
/// model.symmetry_generators; n_target must equal n - |chosen|.
PauliSum contextual_project(const PauliSum& H, const NoncontextualModel& model,
                            const NoncontextualSolution& solution,
                            const std::vector<std::size_t>& chosen_generators,
                            std::size_t n_target);

/// Generator indices ordered least-damaging-first: descending by the energy
/// penalty of flipping that generator's sector in the noncontextual model
/// (a strongly sector-separating generator is the safest to pin).
std::vector<std::size_t> rank_generators(const NoncontextualModel& model,
                                         const NoncontextualSolution& solution);

enum class SubsetMode { greedy, brute_force };

struct SweepPoint {
    std::size_t n_qubits = 0;
    double energy = 0.0;
    double error = 0.0;  // energy - exact ground energy of the input
};

/// Expanding-subspace sweep: for every reachable width, project into the
/// contextual subspace of that size and record the ground energy. The
/// full-width row is the untouched input (error exactly zero by
/// construction). brute_force tries all generator subsets per width
/// (<= 12 generators).
std::vector<SweepPoint> contextual_sweep(const PauliSum& H,
                                         SubsetMode mode = SubsetMode::greedy);

}  // namespace qsw
