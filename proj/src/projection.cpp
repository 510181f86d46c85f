#include "qsw/projection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qsw {

void ProjectionPlan::validate(std::size_t n_qubits) const {
    if (sectors.size() != qubit_indices.size() ||
        bases.size() != qubit_indices.size())
        throw std::invalid_argument("projection plan field lengths differ");
    std::set<std::size_t> seen;
    for (std::size_t q : qubit_indices) {
        if (q >= n_qubits)
            throw std::invalid_argument("projection qubit " + std::to_string(q) +
                                        " out of range");
        if (!seen.insert(q).second)
            throw std::invalid_argument("duplicate projection qubit " +
                                        std::to_string(q));
    }
    for (int s : sectors)
        if (s != 1 && s != -1)
            throw std::invalid_argument("sector entries must be +1 or -1");
    for (char b : bases)
        if (b != 'X' && b != 'Y' && b != 'Z')
            throw std::invalid_argument("projection basis must be X, Y or Z");
}

PauliSum project(const PauliSum& H, const ProjectionPlan& plan) {
    plan.validate(H.n_qubits());
    PauliSum rotated = conjugate(H, plan.pre_rotation);
    if (plan.qubit_indices.empty()) return rotated;

    // Sorted deletion list with per-position sector/basis lookup.
    std::vector<std::size_t> order(plan.qubit_indices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plan.qubit_indices[a] < plan.qubit_indices[b];
    });
    std::vector<std::size_t> drop;
    drop.reserve(order.size());
    for (std::size_t i : order) drop.push_back(plan.qubit_indices[i]);

    PauliSum out(H.n_qubits() - drop.size(), H.drop_tolerance());
    for (const auto& [key, c] : rotated.terms()) {
        cplx coeff = c;
        bool keep = true;
        for (std::size_t i : order) {
            const std::size_t q = plan.qubit_indices[i];
            const bool xb = key.x.test(q), zb = key.z.test(q);
            if (!xb && !zb) continue;  // identity on the plan qubit
            const char op = xb ? (zb ? 'Y' : 'X') : 'Z';
            if (op != plan.bases[i]) {
                keep = false;  // anticommuting factor, projected image is 0
                break;
            }
            if (plan.sectors[i] < 0) coeff = -coeff;
        }
        if (!keep) continue;
        out.add_term(PauliTerm(key.x.without_bits(drop), key.z.without_bits(drop),
                               coeff));
    }
    return out;
}

PauliSum freeze_orbitals(const PauliSum& H,
                         const std::vector<std::size_t>& occupied,
                         const std::vector<std::size_t>& virtuals) {
    ProjectionPlan plan;
    for (std::size_t q : occupied) {
        plan.qubit_indices.push_back(q);
        plan.sectors.push_back(-1);
        plan.bases.push_back('Z');
    }
    for (std::size_t q : virtuals) {
        plan.qubit_indices.push_back(q);
        plan.sectors.push_back(+1);
        plan.bases.push_back('Z');
    }
    // validate() rejects the overlap case through its duplicate check.
    return project(H, plan);
}

std::vector<std::size_t> core_indices_below(const std::vector<double>& orbital_energies,
                                            double threshold) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < orbital_energies.size(); ++q)
        if (orbital_energies[q] < -threshold) out.push_back(q);
    return out;
}

}  // namespace qsw
