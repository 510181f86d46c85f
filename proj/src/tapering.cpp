#include "qsw/tapering.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "qsw/exact.hpp"

namespace qsw {

namespace {

/// Rows are BitVec over a shared column count; plain GF(2) row reduction.
struct Gf2Matrix {
    std::vector<BitVec> rows;
    std::size_t n_cols = 0;

    /// In-place reduced row-echelon form; returns pivot columns in
    /// ascending order and drops zero rows.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t col = 0; col < n_cols && r < rows.size(); ++col) {
            std::size_t sel = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i) {
                if (rows[i].test(col)) {
                    sel = i;
                    break;
                }
            }
            if (sel == rows.size()) continue;
            std::swap(rows[r], rows[sel]);
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (i != r && rows[i].test(col)) rows[i] ^= rows[r];
            pivots.push_back(col);
            ++r;
        }
        rows.resize(r);
        return pivots;
    }

    std::size_t rank() const {
        Gf2Matrix copy = *this;
        return copy.rref().size();
    }
};

BitVec symplectic_vector(const PauliTerm& t) {
    const std::size_t n = t.n_qubits();
    BitVec v(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        if (t.x.test(q)) v.set(q);
        if (t.z.test(q)) v.set(n + q);
    }
    return v;
}

PauliTerm term_from_symplectic(const BitVec& v, std::size_t n) {
    BitVec x(n), z(n);
    for (std::size_t q = 0; q < n; ++q) {
        if (v.test(q)) x.set(q);
        if (v.test(n + q)) z.set(q);
    }
    return PauliTerm(std::move(x), std::move(z));
}

/// Largest mutually commuting subset of a GF(2) span, by symplectic
/// Gram-Schmidt: each anticommuting (hyperbolic) pair contributes one
/// member, the rest is the radical of the restricted form.
std::vector<PauliTerm> isotropic_restriction(std::vector<PauliTerm> basis) {
    std::vector<PauliTerm> kept;
    while (!basis.empty()) {
        PauliTerm v = basis.front();
        basis.erase(basis.begin());
        std::size_t partner = basis.size();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (!commutes(v, basis[i])) {
                partner = i;
                break;
            }
        }
        kept.push_back(v);
        if (partner == basis.size()) continue;
        PauliTerm p = basis[partner];
        basis.erase(basis.begin() + partner);
        for (auto& w : basis) {
            if (!commutes(v, w)) w = PauliTerm(w.x ^ p.x, w.z ^ p.z);
            if (!commutes(p, w)) w = PauliTerm(w.x ^ v.x, w.z ^ v.z);
        }
    }
    return kept;
}

std::vector<PauliTerm> canonical_rref_terms(const std::vector<PauliTerm>& terms,
                                            std::size_t n) {
    Gf2Matrix m;
    m.n_cols = 2 * n;
    for (const auto& t : terms) m.rows.push_back(symplectic_vector(t));
    m.rref();
    std::vector<PauliTerm> out;
    out.reserve(m.rows.size());
    for (const auto& row : m.rows) out.push_back(term_from_symplectic(row, n));
    return out;
}

/// One +pi/2 rotation applied to a single term.
PauliTerm conjugate_term_once(const PauliTerm& t, const PauliTerm& g) {
    if (commutes(t, g)) return t;
    PauliTerm r = multiply(g, t);
    r.coeff = cplx(-r.coeff.imag(), r.coeff.real());  // times i
    return r;
}

void validate_basis(const std::vector<PauliTerm>& generators, std::size_t n) {
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].n_qubits() != n)
            throw std::invalid_argument("generator width mismatch");
        if (generators[i].is_identity_string())
            throw std::invalid_argument("identity cannot be a symmetry generator");
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (!commutes(generators[i], generators[j]))
                throw std::invalid_argument(
                    "symmetry generators must pairwise commute");
    }
    Gf2Matrix m;
    m.n_cols = 2 * n;
    for (const auto& g : generators) m.rows.push_back(symplectic_vector(g));
    if (m.rank() != generators.size())
        throw std::invalid_argument("symmetry generators must be independent");
}

}  // namespace

namespace detail {

std::vector<PauliTerm> symmetry_kernel_basis(const PauliSum& H) {
    const std::size_t n = H.n_qubits();
    Gf2Matrix constraints;
    constraints.n_cols = 2 * n;
    for (const auto& [key, c] : H.terms()) {
        // Row [z_k | x_k], so row * [x_s | z_s] is the symplectic form.
        BitVec row(2 * n);
        for (std::size_t q = 0; q < n; ++q) {
            if (key.z.test(q)) row.set(q);
            if (key.x.test(q)) row.set(n + q);
        }
        if (row.any()) constraints.rows.push_back(std::move(row));
    }
    const std::vector<std::size_t> pivots = constraints.rref();

    std::vector<bool> is_pivot(2 * n, false);
    for (std::size_t p : pivots) is_pivot[p] = true;

    std::vector<PauliTerm> kernel;
    for (std::size_t f = 0; f < 2 * n; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(2 * n);
        v.set(f);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (constraints.rows[r].test(f)) v.set(pivots[r]);
        kernel.push_back(term_from_symplectic(v, n));
    }
    return canonical_rref_terms(kernel, n);
}

std::vector<PauliTerm> canonical_generating_set(
    const std::vector<PauliTerm>& terms, std::size_t n_qubits) {
    return canonical_rref_terms(terms, n_qubits);
}

std::uint64_t solve_generator_subset(const std::vector<PauliTerm>& rref_basis,
                                     const PauliTerm& target) {
    if (rref_basis.size() > 64)
        throw std::invalid_argument("generator subset mask limited to 64");
    BitVec residual = symplectic_vector(target);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < rref_basis.size(); ++i) {
        const BitVec row = symplectic_vector(rref_basis[i]);
        std::size_t pivot = row.size();
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row.test(c)) {
                pivot = c;
                break;
            }
        if (pivot < row.size() && residual.test(pivot)) {
            mask |= std::uint64_t{1} << i;
            residual ^= row;
        }
    }
    if (residual.any())
        throw std::invalid_argument(
            "string is not a product of the generating set");
    return mask;
}

CliffordConstruction clifford_construction(
    const std::vector<PauliTerm>& generators, std::size_t n_qubits) {
    validate_basis(generators, n_qubits);
    CliffordConstruction cc;
    std::vector<PauliTerm> cur;
    cur.reserve(generators.size());
    for (const auto& g : generators) cur.push_back(g.with_coeff(1.0));
    std::set<std::size_t> used;

    auto push_rotation = [&](const PauliTerm& g) {
        cc.rotations.push_clifford(g, 1);
        for (auto& t : cur) t = conjugate_term_once(t, g);
    };

    for (std::size_t i = 0; i < cur.size(); ++i) {
        const bool single_z = cur[i].x.none() && cur[i].z.count() == 1;
        if (!single_z) {
            if (cur[i].x.none()) {
                // Z-type: give it X content on the chosen qubit first.
                std::size_t q = n_qubits;
                for (std::size_t c = 0; c < n_qubits; ++c) {
                    if (cur[i].z.test(c) && !used.count(c)) {
                        q = c;
                        break;
                    }
                }
                if (q == n_qubits)
                    throw std::logic_error(
                        "no free support qubit; generators dependent");
                BitVec x(n_qubits);
                x.set(q);
                push_rotation(PauliTerm(std::move(x), cur[i].z));
            }
            // Now some x bit is set; such qubits are never used pivots.
            std::size_t q = n_qubits;
            for (std::size_t c = 0; c < n_qubits; ++c) {
                if (cur[i].x.test(c)) {
                    q = c;
                    break;
                }
            }
            BitVec z = cur[i].z;
            z.set(q, !z.test(q));
            push_rotation(PauliTerm(cur[i].x, std::move(z)));
        }
        // cur[i] is now +/- Z on exactly one qubit.
        std::size_t pivot = n_qubits;
        for (std::size_t c = 0; c < n_qubits; ++c)
            if (cur[i].z.test(c)) pivot = c;
        if (used.count(pivot))
            throw std::logic_error("pivot collision; generators dependent");
        used.insert(pivot);
        cc.pivots.push_back(pivot);
        cc.signs.push_back(cur[i].coeff.real() > 0 ? +1 : -1);
    }
    return cc;
}

}  // namespace detail

SymmetryBasis find_z2_symmetries(const PauliSum& H) {
    if (H.empty()) throw std::invalid_argument("empty Hamiltonian");
    std::vector<PauliTerm> basis = detail::symmetry_kernel_basis(H);
    basis = isotropic_restriction(std::move(basis));
    basis = canonical_rref_terms(basis, H.n_qubits());
    SymmetryBasis out;
    out.generators = std::move(basis);
    if (!out.generators.empty())
        out.pivot_qubits =
            detail::clifford_construction(out.generators, H.n_qubits()).pivots;
    return out;
}

RotationSequence build_clifford(const SymmetryBasis& basis) {
    if (basis.generators.empty())
        throw std::invalid_argument("empty symmetry basis");
    const std::size_t n = basis.generators.front().n_qubits();
    return detail::clifford_construction(basis.generators, n).rotations;
}

SymmetrySector select_sector(const SymmetryBasis& basis,
                             const BitVec& reference_bits) {
    SymmetrySector sector;
    for (const auto& g : basis.generators) {
        if (g.x.any())
            throw std::invalid_argument(
                "sector selection needs Z-type generators; conjugate first");
        if (g.n_qubits() != reference_bits.size())
            throw std::invalid_argument("reference bitstring width mismatch");
        sector.assignments.push_back(g.z.and_parity(reference_bits) ? -1 : +1);
    }
    return sector;
}

PauliSum taper(const PauliSum& H, const SymmetryBasis& basis,
               const SymmetrySector& sector) {
    if (sector.assignments.size() != basis.generators.size())
        throw std::invalid_argument("sector length does not match basis");
    if (basis.generators.empty()) return H;
    const auto cc =
        detail::clifford_construction(basis.generators, H.n_qubits());
    ProjectionPlan plan;
    plan.pre_rotation = cc.rotations;
    plan.qubit_indices = cc.pivots;
    for (std::size_t i = 0; i < cc.pivots.size(); ++i) {
        plan.bases.push_back('Z');
        plan.sectors.push_back(sector.assignments[i] * cc.signs[i]);
    }
    return project(H, plan);
}

std::vector<SectorScanEntry> scan_sectors(const PauliSum& H,
                                          const SymmetryBasis& basis) {
    const std::size_t m = basis.generators.size();
    if (m > 12)
        throw std::invalid_argument("sector scan limited to 12 generators");
    std::vector<SectorScanEntry> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
        SectorScanEntry e;
        for (std::size_t i = 0; i < m; ++i)
            e.sector.assignments.push_back((bits >> i) & 1 ? -1 : +1);
        PauliSum reduced = taper(H, basis, e.sector);
        if (reduced.empty()) {
            e.ground_energy = 0.0;
        } else if (reduced.n_qubits() <= 10) {
            e.ground_energy = dense_spectrum(reduced).eigenvalues.front();
        } else {
            e.ground_energy = ground_state(reduced).energy;
        }
        out.push_back(std::move(e));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SectorScanEntry& a, const SectorScanEntry& b) {
                         return a.ground_energy < b.ground_energy;
                     });
    return out;
}

}  // namespace qsw
