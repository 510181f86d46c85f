#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qsw/pauli.hpp"

namespace qsw {

/// Ordered set of distinct computational-basis configurations with sample
/// multiplicities. Ordering: descending count, ties by bitstring value.
struct ConfigurationSubspace {
    enum class Source { exact_state, file, explicit_list };

    std::size_t n_qubits = 0;
    std::vector<BitVec> configs;
    std::vector<std::size_t> counts;
    Source source = Source::explicit_list;

    std::size_t size() const { return configs.size(); }

    static ConfigurationSubspace from_counts(
        std::size_t n_qubits, const std::map<std::uint64_t, std::size_t>& counts,
        Source source, std::optional<std::size_t> max_k = {});
};

struct QsciResult {
    double energy = 0.0;
    std::vector<cplx> eigenvector;  // over the subspace configurations
    std::size_t k_used = 0;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // subspace ground gap below 1e-10
    double gap = 0.0;
};

/// Multinomial sampling of basis configurations from |amplitude|^2, with
/// optional independent bit-flip noise per bit. Seeded and reproducible.
ConfigurationSubspace sample_configurations(
    std::span<const cplx> state, std::size_t n_qubits, std::size_t shots,
    double noise_p, std::uint64_t seed, std::optional<std::size_t> max_k = {});

/// <a|H|b>: sum over terms with x-block a^b of coefficient times the exact
/// power of i from the Y content and the (-1)^(z.b) parity.
cplx matrix_element(const PauliSum& H, const BitVec& a, const BitVec& b);

/// Assembles the K x K projected matrix and returns its lowest eigenpair
/// (dense up to 2000 configurations, iterative beyond).
QsciResult solve_subspace(const PauliSum& H, const ConfigurationSubspace& subspace);

struct QsciOptions {
    std::size_t shots = 100000;
    double noise_p = 0.0;
    std::uint64_t seed = 1;
    std::optional<std::size_t> filter_particle_number;  // keep matching popcounts
    std::optional<std::size_t> max_k;
};

/// State fed to the sampler: explicit amplitudes, a pre-sampled
/// configuration list, or "use the exact ground state of H".
struct ExactGroundStateSource {};
using StateSource =
    std::variant<ExactGroundStateSource, std::vector<cplx>, ConfigurationSubspace>;

/// End-to-end run: obtain/sample configurations, optionally filter by
/// particle number, solve the subspace problem.
QsciResult qsci_run(const PauliSum& H, const StateSource& source,
                    const QsciOptions& opts);

ConfigurationSubspace filter_particle_number(const ConfigurationSubspace& in,
                                             std::size_t particle_number);

/// Samples file: one `bitstring count` pair per line, '#' comments.
ConfigurationSubspace load_samples_file(const std::filesystem::path& path);

void save_samples_file(const std::filesystem::path& path,
                       const ConfigurationSubspace& subspace);

}  // namespace qsw
