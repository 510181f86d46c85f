#pragma once

// The 15-string support of the minimal-basis H2 Hamiltonian under
// Jordan-Wigner: two anticommuting cliques plus a commuting component.

#include <random>
#include <string>
#include <vector>

#include "qsw/pauli.hpp"

namespace testgen {

inline const std::vector<std::string>& h2_support() {
    static const std::vector<std::string> strings = {
        "IIII", "ZIII", "IZII", "IIZI", "IIIZ", "ZZII", "ZIZI", "ZIIZ",
        "IZZI", "IZIZ", "IIZZ", "XXYY", "XYYX", "YXXY", "YYXX"};
    return strings;
}

inline qsw::PauliSum random_h2_structure(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    qsw::PauliSum H(4);
    for (const auto& s : h2_support()) {
        double c = coeff(rng);
        if (std::abs(c) < 1e-3) c = 1e-3;  // keep every string present
        H.add(s, c);
    }
    return H;
}

}  // namespace testgen
