#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qsw/pauli.hpp"

namespace qsw {

/// Convention tag stored in every file this workbench writes. Files carrying
/// a different tag fail loudly instead of silently flipping signs.
inline constexpr const char* kConventionTag = "q0-leftmost;occupied|1>:Z=-1";

struct HamiltonianMetadata {
    std::string convention = kConventionTag;
    std::string provenance;
    std::optional<std::string> reference_bitstring;
    std::optional<std::vector<double>> orbital_energies;
};

struct HamiltonianFile {
    PauliSum sum;
    HamiltonianMetadata metadata;
    std::vector<std::string> warnings;

    HamiltonianFile() : sum(0) {}
    explicit HamiltonianFile(PauliSum s) : sum(std::move(s)) {}
};

/// Reads the canonical JSON format or the interoperability line format
/// (`coeff_re coeff_im PAULI_STRING`, '#' comments). Errors carry line
/// numbers; a convention mismatch is an error; imaginary parts above 1e-10
/// produce a non-Hermitian warning.
HamiltonianFile load_hamiltonian(const std::filesystem::path& path);

void save_hamiltonian(const std::filesystem::path& path, const PauliSum& sum,
                      const HamiltonianMetadata& metadata = {});

/// Union of strings over the files with each coefficient the arithmetic
/// mean across files (absent terms count as zero).
PauliSum average_hamiltonians(const std::vector<std::filesystem::path>& paths);

/// Orbital-energy file: JSON array of numbers or one value per line.
std::vector<double> load_orbital_energies(const std::filesystem::path& path);

}  // namespace qsw
