#include "qsw/contextual.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qsw/exact.hpp"

namespace qsw {

namespace {

/// Connected components of the commute-graph on `rest`; the set is
/// noncontextual iff every component is internally commuting (members of
/// different components then pairwise anticommute by construction).
std::pair<std::vector<std::vector<std::size_t>>, bool> commuting_components(
    const std::vector<PauliTerm>& rest) {
    const std::size_t m = rest.size();
    std::vector<int> component(m, -1);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t s = 0; s < m; ++s) {
        if (component[s] >= 0) continue;
        std::vector<std::size_t> stack{s};
        component[s] = static_cast<int>(groups.size());
        std::vector<std::size_t> members;
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            members.push_back(a);
            for (std::size_t b = 0; b < m; ++b) {
                if (component[b] < 0 && commutes(rest[a], rest[b])) {
                    component[b] = component[a];
                    stack.push_back(b);
                }
            }
        }
        groups.push_back(std::move(members));
    }
    bool all_cliques = true;
    for (const auto& g : groups) {
        for (std::size_t i = 0; i < g.size() && all_cliques; ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                if (!commutes(rest[g[i]], rest[g[j]])) {
                    all_cliques = false;
                    break;
                }
    }
    return {std::move(groups), all_cliques};
}

bool symplectic_less(const PauliTerm& a, const PauliTerm& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.z < b.z;
}

struct NuEvaluation {
    double sym = 0.0;            // A(nu)
    std::vector<double> clique;  // B_k(nu)
};

NuEvaluation evaluate_nu(const NoncontextualModel& model,
                         std::uint64_t nu_minus_mask) {
    NuEvaluation ev;
    ev.clique.assign(model.n_cliques(), 0.0);
    for (const auto& comp : model.components) {
        const int parity =
            std::popcount(comp.generator_mask & nu_minus_mask) & 1 ? -1 : 1;
        const double s = comp.sign * parity;
        ev.sym += comp.h_sym * s;
        for (std::size_t k = 0; k < ev.clique.size(); ++k)
            ev.clique[k] += comp.h_clique[k] * s;
    }
    return ev;
}

double nu_best_energy(const NoncontextualModel& model,
                      std::uint64_t nu_minus_mask) {
    const NuEvaluation ev = evaluate_nu(model, nu_minus_mask);
    double nb = 0.0;
    for (double b : ev.clique) nb += b * b;
    return ev.sym - std::sqrt(nb);
}

std::uint64_t nu_to_mask(const std::vector<int>& nu) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < nu.size(); ++i)
        if (nu[i] < 0) mask |= std::uint64_t{1} << i;
    return mask;
}

double solve_ground_energy(const PauliSum& H) {
    if (H.empty()) return 0.0;
    if (H.n_qubits() == 0) {
        // Scalar Hamiltonian left after projecting everything.
        return H.terms().begin()->second.real();
    }
    if (H.n_qubits() <= 6) return dense_spectrum(H).eigenvalues.front();
    return ground_state(H).energy;
}

}  // namespace

CommutationStructure analyze_commutation_structure(
    const std::vector<PauliTerm>& terms) {
    CommutationStructure out;
    std::vector<PauliTerm> rest;
    for (const auto& t : terms) {
        bool universal = true;
        for (const auto& u : terms) {
            if (!commutes(t, u)) {
                universal = false;
                break;
            }
        }
        if (universal) {
            out.symmetry_component.push_back(t.with_coeff(1.0));
        } else {
            rest.push_back(t.with_coeff(1.0));
        }
    }
    auto [groups, all_cliques] = commuting_components(rest);
    out.noncontextual = all_cliques;
    if (!all_cliques) return out;
    for (const auto& g : groups) {
        std::vector<PauliTerm> clique;
        clique.reserve(g.size());
        for (std::size_t idx : g) clique.push_back(rest[idx]);
        std::sort(clique.begin(), clique.end(), support_major_less);
        out.cliques.push_back(std::move(clique));
    }
    // Deterministic clique order: diagonal-most representative first.
    std::sort(out.cliques.begin(), out.cliques.end(),
              [](const auto& a, const auto& b) {
                  return symplectic_less(a.front(), b.front());
              });
    std::sort(out.symmetry_component.begin(), out.symmetry_component.end(),
              symplectic_less);
    return out;
}

bool is_noncontextual(const std::vector<PauliTerm>& terms) {
    return analyze_commutation_structure(terms).noncontextual;
}

std::pair<PauliSum, PauliSum> partition_noncontextual(
    const PauliSum& H, PartitionStrategy strategy) {
    if (strategy != PartitionStrategy::greedy_by_magnitude)
        throw std::invalid_argument("unknown partition strategy");
    std::vector<PauliTerm> terms = H.term_list();
    std::stable_sort(terms.begin(), terms.end(),
                     [](const PauliTerm& a, const PauliTerm& b) {
                         const double ma = std::abs(a.coeff),
                                      mb = std::abs(b.coeff);
                         if (ma != mb) return ma > mb;
                         return support_major_less(a, b);
                     });
    std::vector<PauliTerm> admitted;
    PauliSum nc(H.n_qubits(), H.drop_tolerance());
    PauliSum residual(H.n_qubits(), H.drop_tolerance());
    for (const auto& t : terms) {
        admitted.push_back(t);
        if (is_noncontextual(admitted)) {
            nc.add_term(t);
        } else {
            admitted.pop_back();
            residual.add_term(t);
        }
    }
    return {std::move(nc), std::move(residual)};
}

PauliSum NoncontextualModel::reconstruct(double drop_tolerance) const {
    PauliSum out(n_qubits, drop_tolerance);
    for (const auto& comp : components) {
        const PauliTerm p(comp.x, comp.z, 1.0);
        if (comp.h_sym != 0.0) out.add_term(p.with_coeff(comp.h_sym));
        for (std::size_t k = 0; k < clique_reps.size(); ++k) {
            if (comp.h_clique[k] == 0.0) continue;
            PauliTerm pc = multiply(p, clique_reps[k]);
            pc.coeff *= comp.h_clique[k];
            out.add_term(pc);
        }
    }
    return out;
}

NoncontextualModel build_model(const PauliSum& H_nc) {
    const auto structure = analyze_commutation_structure(H_nc.term_list());
    if (!structure.noncontextual)
        throw std::invalid_argument("build_model requires a noncontextual sum");

    NoncontextualModel model;
    model.n_qubits = H_nc.n_qubits();
    for (const auto& clique : structure.cliques)
        model.clique_reps.push_back(clique.front());
    const std::size_t K = model.clique_reps.size();
    if (K > 2 * model.n_qubits + 1)
        throw std::logic_error("clique count exceeds the 2N+1 bound");

    // P-parts: symmetry strings as-is, clique terms divided by their
    // representative; every part must commute with every other stored
    // string or the contextuality analysis was wrong.
    struct Entry {
        PauliTerm p;
        double h_sym = 0.0;
        std::vector<double> h_clique;
    };
    std::map<PauliSum::Key, Entry> entries;
    auto entry_for = [&](const PauliTerm& p) -> Entry& {
        auto [it, fresh] = entries.try_emplace(PauliSum::Key{p.x, p.z});
        if (fresh) {
            it->second.p = p.with_coeff(1.0);
            it->second.h_clique.assign(K, 0.0);
        }
        return it->second;
    };

    for (const auto& [key, c] : H_nc.terms()) {
        if (std::abs(c.imag()) > 1e-10)
            throw std::invalid_argument("noncontextual model needs a Hermitian sum");
        const PauliTerm term(key.x, key.z, 1.0);
        int clique_index = -1;
        for (std::size_t k = 0; k < K && clique_index < 0; ++k)
            for (const auto& member : structure.cliques[k])
                if (member.x == key.x && member.z == key.z) {
                    clique_index = static_cast<int>(k);
                    break;
                }
        if (clique_index < 0) {
            entry_for(term).h_sym += c.real();
            continue;
        }
        // term = sign * P * C_k with P = term * C_k and a real sign.
        PauliTerm p = multiply(term, model.clique_reps[clique_index]);
        if (std::abs(p.coeff.imag()) > 1e-12)
            throw std::logic_error("clique quotient is not Hermitian");
        const double sign = p.coeff.real();
        entry_for(p.with_coeff(1.0)).h_clique[clique_index] += sign * c.real();
    }

    std::vector<PauliTerm> parts;
    for (const auto& [key, e] : entries)
        if (!e.p.is_identity_string()) parts.push_back(e.p);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j)
            if (!commutes(parts[i], parts[j]))
                throw std::logic_error(
                    "symmetry parts fail to commute; contextuality check bug");
    model.symmetry_generators =
        detail::canonical_generating_set(parts, model.n_qubits);
    if (model.symmetry_generators.size() > 64)
        throw std::invalid_argument("more than 64 symmetry generators");

    for (const auto& [key, e] : entries) {
        NoncontextualModel::Component comp;
        comp.x = e.p.x;
        comp.z = e.p.z;
        comp.h_sym = e.h_sym;
        comp.h_clique = e.h_clique;
        if (e.p.is_identity_string()) {
            comp.generator_mask = 0;
            comp.sign = 1;
        } else {
            comp.generator_mask =
                detail::solve_generator_subset(model.symmetry_generators, e.p);
            PauliTerm prod(BitVec(model.n_qubits), BitVec(model.n_qubits), 1.0);
            for (std::size_t i = 0; i < model.symmetry_generators.size(); ++i)
                if (comp.generator_mask >> i & 1)
                    prod = multiply(prod, model.symmetry_generators[i]);
            if (std::abs(prod.coeff.imag()) > 1e-12)
                throw std::logic_error("generator product is not Hermitian");
            comp.sign = prod.coeff.real() > 0 ? +1 : -1;
        }
        model.components.push_back(std::move(comp));
    }
    return model;
}

double objective(const NoncontextualModel& model, const std::vector<int>& nu,
                 const std::vector<double>& r) {
    if (nu.size() != model.n_generators())
        throw std::invalid_argument("nu length does not match generator count");
    if (r.size() != model.n_cliques())
        throw std::invalid_argument("r length does not match clique count");
    const NuEvaluation ev = evaluate_nu(model, nu_to_mask(nu));
    double value = ev.sym;
    for (std::size_t k = 0; k < r.size(); ++k) value += ev.clique[k] * r[k];
    return value;
}

NoncontextualSolution optimize(const NoncontextualModel& model) {
    const std::size_t m = model.n_generators();
    const std::size_t K = model.n_cliques();

    auto finish = [&](std::uint64_t mask, bool exact) {
        NoncontextualSolution sol;
        sol.exact = exact;
        const NuEvaluation ev = evaluate_nu(model, mask);
        double nb = 0.0;
        for (double b : ev.clique) nb += b * b;
        nb = std::sqrt(nb);
        sol.energy = ev.sym - nb;
        sol.nu.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            sol.nu[i] = (mask >> i & 1) ? -1 : +1;
        sol.r.assign(K, 0.0);
        if (K > 0) {
            if (nb > 0.0) {
                for (std::size_t k = 0; k < K; ++k)
                    sol.r[k] = -ev.clique[k] / nb;
            } else {
                sol.r[0] = 1.0;  // objective flat in r; any unit vector
            }
        }
        return sol;
    };

    if (m <= 16) {
        std::uint64_t best_mask = 0;
        double best = nu_best_energy(model, 0);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
            const double e = nu_best_energy(model, mask);
            if (e < best) {
                best = e;
                best_mask = mask;
            }
        }
        return finish(best_mask, true);
    }

    // Greedy single-bit descent with seeded restarts.
    std::mt19937_64 rng(0x6e75736561726368ull);
    std::uint64_t best_mask = 0;
    double best = nu_best_energy(model, 0);
    const std::uint64_t span_mask =
        m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    for (int restart = 0; restart < 24; ++restart) {
        std::uint64_t mask = restart == 0 ? 0 : (rng() & span_mask);
        double cur = nu_best_energy(model, mask);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < m; ++i) {
                const std::uint64_t cand = mask ^ (std::uint64_t{1} << i);
                const double e = nu_best_energy(model, cand);
                if (e < cur - 1e-15) {
                    cur = e;
                    mask = cand;
                    improved = true;
                }
            }
        }
        if (cur < best) {
            best = cur;
            best_mask = mask;
        }
    }
    return finish(best_mask, false);
}

RotationSequence seqrot_rotations(const NoncontextualModel& model,
                                  const NoncontextualSolution& solution) {
    const std::size_t K = model.n_cliques();
    if (K == 0)
        throw std::invalid_argument("no cliques to rotate");
    RotationSequence seq;
    if (K == 1) return seq;
    if (solution.r.size() != K)
        throw std::invalid_argument("r length does not match clique count");
    double head = solution.r[0];
    for (std::size_t k = 1; k < K; ++k) {
        // Rotation plane generator i*C_k*C_1 is a Pauli string with a real
        // sign folded into the angle.
        PauliTerm prod = multiply(model.clique_reps[k], model.clique_reps[0]);
        if (std::abs(prod.coeff.real()) > 1e-12)
            throw std::logic_error("clique representatives do not anticommute");
        const double s = -prod.coeff.imag();
        const double theta = std::atan2(solution.r[k], head);
        seq.push(PauliTerm(prod.x, prod.z, 1.0), s * theta);
        head = std::hypot(head, solution.r[k]);
    }
    return seq;
}

PauliSum contextual_project(const PauliSum& H, const NoncontextualModel& model,
                            const NoncontextualSolution& solution,
                            const std::vector<std::size_t>& chosen_generators,
                            std::size_t n_target) {
    if (H.n_qubits() != model.n_qubits)
        throw std::invalid_argument("model width does not match Hamiltonian");
    if (n_target + chosen_generators.size() != H.n_qubits())
        throw std::invalid_argument(
            "n_target inconsistent with chosen generator count");
    std::vector<std::size_t> chosen = chosen_generators;
    std::sort(chosen.begin(), chosen.end());
    if (std::adjacent_find(chosen.begin(), chosen.end()) != chosen.end())
        throw std::invalid_argument("duplicate generator choice");
    for (std::size_t i : chosen)
        if (i >= model.n_generators())
            throw std::invalid_argument("generator index out of range");
    if (solution.nu.size() != model.n_generators())
        throw std::invalid_argument("solution does not match model");

    PauliSum rotated = model.n_cliques() >= 2
                           ? conjugate(H, seqrot_rotations(model, solution))
                           : H;
    if (chosen.empty()) return rotated;

    std::vector<PauliTerm> sub;
    for (std::size_t i : chosen) sub.push_back(model.symmetry_generators[i]);
    const auto cc = detail::clifford_construction(sub, H.n_qubits());
    ProjectionPlan plan;
    plan.pre_rotation = cc.rotations;
    plan.qubit_indices = cc.pivots;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
        plan.bases.push_back('Z');
        plan.sectors.push_back(solution.nu[chosen[j]] * cc.signs[j]);
    }
    return project(rotated, plan);
}

std::vector<std::size_t> rank_generators(const NoncontextualModel& model,
                                         const NoncontextualSolution& solution) {
    const std::uint64_t base = nu_to_mask(solution.nu);
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < model.n_generators(); ++i) {
        const double flipped =
            nu_best_energy(model, base ^ (std::uint64_t{1} << i));
        scored.emplace_back(flipped - solution.energy, i);
    }
    // Largest sector-flip penalty first: those directions are the most
    // confidently fixed, so projecting them loses the least.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) {
                         if (a.first != b.first) return a.first > b.first;
                         return a.second < b.second;
                     });
    std::vector<std::size_t> order;
    order.reserve(scored.size());
    for (const auto& [delta, idx] : scored) order.push_back(idx);
    return order;
}

std::vector<SweepPoint> contextual_sweep(const PauliSum& H, SubsetMode mode) {
    const double e_exact = solve_ground_energy(H);
    auto [h_nc, residual] = partition_noncontextual(H);
    const NoncontextualModel model = build_model(h_nc);
    const NoncontextualSolution solution = optimize(model);
    const std::vector<std::size_t> ranking = rank_generators(model, solution);
    const std::size_t m = model.n_generators();
    if (mode == SubsetMode::brute_force && m > 12)
        throw std::invalid_argument("brute-force sweep limited to 12 generators");

    std::vector<SweepPoint> points;
    points.push_back(SweepPoint{H.n_qubits(), e_exact, 0.0});
    for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t target = H.n_qubits() - j;
        double energy = 0.0;
        if (mode == SubsetMode::greedy) {
            std::vector<std::size_t> chosen(ranking.begin(),
                                            ranking.begin() + j);
            energy = solve_ground_energy(
                contextual_project(H, model, solution, chosen, target));
        } else {
            // All size-j subsets; keep the best energy.
            std::vector<std::size_t> idx(j);
            for (std::size_t i = 0; i < j; ++i) idx[i] = i;
            bool first = true;
            while (true) {
                const double e = solve_ground_energy(
                    contextual_project(H, model, solution, idx, target));
                if (first || e < energy) energy = e;
                first = false;
                // next combination
                std::size_t i = j;
                while (i > 0 && idx[i - 1] == m - j + i - 1) --i;
                if (i == 0) break;
                ++idx[i - 1];
                for (std::size_t l = i; l < j; ++l) idx[l] = idx[l - 1] + 1;
            }
        }
        points.push_back(SweepPoint{target, energy, energy - e_exact});
    }
    return points;
}

}  // namespace qsw
