#pragma once

// Seeded generators for property tests.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "qsw/pauli.hpp"

namespace testgen {

inline qsw::PauliTerm random_term(std::mt19937_64& rng, std::size_t n,
                                  bool real_coeff = true,
                                  bool allow_identity = true) {
    std::uniform_int_distribution<int> op(0, 3);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    while (true) {
        qsw::BitVec x(n), z(n);
        for (std::size_t q = 0; q < n; ++q) {
            switch (op(rng)) {
                case 1: x.set(q); break;
                case 2: z.set(q); break;
                case 3: x.set(q); z.set(q); break;
                default: break;
            }
        }
        qsw::PauliTerm t(std::move(x), std::move(z));
        if (!allow_identity && t.is_identity_string()) continue;
        t.coeff = real_coeff ? qsw::cplx{coeff(rng), 0.0}
                             : qsw::cplx{coeff(rng), coeff(rng)};
        return t;
    }
}

inline qsw::PauliSum random_hermitian_sum(std::mt19937_64& rng, std::size_t n,
                                          std::size_t n_terms,
                                          double scale = 1.0) {
    const std::size_t cap =
        n >= 12 ? n_terms
                : std::min<std::size_t>(n_terms, std::size_t{1} << (2 * n));
    qsw::PauliSum H(n);
    std::size_t attempts = 0;
    while (H.n_terms() < cap && ++attempts < 100000) {
        qsw::PauliTerm t = random_term(rng, n);
        t.coeff *= scale;
        H.add_term(t);
    }
    return H;
}

/// Independent, pairwise commuting, non-identity strings.
inline std::vector<qsw::PauliTerm> random_commuting_generators(
    std::mt19937_64& rng, std::size_t n, std::size_t count) {
    std::vector<qsw::PauliTerm> gens;
    std::set<std::string> seen;
    std::size_t attempts = 0;
    while (gens.size() < count && ++attempts < 100000) {
        qsw::PauliTerm t = random_term(rng, n, true, false);
        t.coeff = 1.0;
        bool ok = seen.insert(qsw::render_pauli(t)).second;
        for (const auto& g : gens)
            if (!qsw::commutes(g, t)) ok = false;
        if (!ok) continue;
        // Independence: the new string must not be a product of the old
        // ones; check by string-level XOR span (phase-free).
        std::set<std::string> span{std::string(n, 'I')};
        for (const auto& g : gens) {
            std::set<std::string> next = span;
            for (const auto& s : span) {
                std::string prod(n, 'I');
                const std::string gs = qsw::render_pauli(g);
                for (std::size_t q = 0; q < n; ++q) {
                    const auto bits = [](char c) {
                        return c == 'I' ? 0 : c == 'X' ? 1 : c == 'Z' ? 2 : 3;
                    };
                    const int b = bits(s[q]) ^ bits(gs[q]);
                    prod[q] = b == 0 ? 'I' : b == 1 ? 'X' : b == 2 ? 'Z' : 'Y';
                }
                next.insert(prod);
            }
            span = next;
        }
        if (span.count(qsw::render_pauli(t))) continue;
        gens.push_back(t);
    }
    return gens;
}

/// Random Hermitian sum in which every term commutes with every planted
/// generator (rejection sampling), identity included with high chance.
inline qsw::PauliSum random_sum_with_planted_symmetries(
    std::mt19937_64& rng, std::size_t n, std::size_t n_terms,
    const std::vector<qsw::PauliTerm>& planted, double scale = 1.0) {
    qsw::PauliSum H(n);
    std::size_t attempts = 0;
    while (H.n_terms() < n_terms && ++attempts < 1000000) {
        qsw::PauliTerm t = random_term(rng, n);
        bool ok = true;
        for (const auto& s : planted)
            if (!qsw::commutes(t, s)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        t.coeff *= scale;
        H.add_term(t);
    }
    return H;
}

/// Phase-free group span of a generator list, as dense strings (includes
/// the identity). Independent of the library's GF(2) helpers.
inline std::set<std::string> string_group_span(
    const std::vector<qsw::PauliTerm>& gens, std::size_t n) {
    const auto bits = [](char c) {
        return c == 'I' ? 0 : c == 'X' ? 1 : c == 'Z' ? 2 : 3;
    };
    std::set<std::string> span{std::string(n, 'I')};
    for (const auto& g : gens) {
        const std::string gs = qsw::render_pauli(g);
        std::set<std::string> next = span;
        for (const auto& s : span) {
            std::string prod(n, 'I');
            for (std::size_t q = 0; q < n; ++q) {
                const int b = bits(s[q]) ^ bits(gs[q]);
                prod[q] = b == 0 ? 'I' : b == 1 ? 'X' : b == 2 ? 'Z' : 'Y';
            }
            next.insert(prod);
        }
        span = next;
    }
    return span;
}

}  // namespace testgen
