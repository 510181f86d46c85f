#include "qsw/qsci.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qsw/exact.hpp"

namespace qsw {

namespace {

constexpr std::size_t kDenseSubspaceCap = 2000;

bool subspace_order(const std::pair<std::uint64_t, std::size_t>& a,
                    const std::pair<std::uint64_t, std::size_t>& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
}

}  // namespace

ConfigurationSubspace ConfigurationSubspace::from_counts(
    std::size_t n_qubits, const std::map<std::uint64_t, std::size_t>& counts,
    Source source, std::optional<std::size_t> max_k) {
    std::vector<std::pair<std::uint64_t, std::size_t>> items(counts.begin(),
                                                             counts.end());
    std::sort(items.begin(), items.end(), subspace_order);
    if (max_k && items.size() > *max_k) items.resize(*max_k);
    ConfigurationSubspace out;
    out.n_qubits = n_qubits;
    out.source = source;
    for (const auto& [index, count] : items) {
        if (count == 0) throw std::invalid_argument("zero sample count");
        out.configs.push_back(BitVec::from_index(index, n_qubits));
        out.counts.push_back(count);
    }
    return out;
}

ConfigurationSubspace sample_configurations(std::span<const cplx> state,
                                            std::size_t n_qubits,
                                            std::size_t shots, double noise_p,
                                            std::uint64_t seed,
                                            std::optional<std::size_t> max_k) {
    if (shots == 0) throw std::invalid_argument("shots must be >= 1");
    if (noise_p < 0.0 || noise_p >= 1.0)
        throw std::invalid_argument("noise probability must be in [0, 1)");
    if (state.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("state dimension mismatch");

    // Cumulative distribution over the nonzero amplitudes only.
    std::vector<std::uint64_t> support;
    std::vector<double> cdf;
    double total = 0.0;
    for (std::size_t j = 0; j < state.size(); ++j) {
        const double p = std::norm(state[j]);
        if (p == 0.0) continue;
        total += p;
        support.push_back(j);
        cdf.push_back(total);
    }
    if (support.empty()) throw std::invalid_argument("empty state");
    if (std::abs(total - 1.0) > 1e-8)
        throw std::invalid_argument("state is not normalized");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::uint64_t bit_mask =
        n_qubits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;

    std::map<std::uint64_t, std::size_t> counts;
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uniform(rng) * total;
        const std::size_t pos =
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        std::uint64_t outcome = support[std::min(pos, support.size() - 1)];
        if (noise_p > 0.0) {
            for (std::size_t q = 0; q < n_qubits; ++q)
                if (uniform(rng) < noise_p) outcome ^= std::uint64_t{1} << q;
            outcome &= bit_mask;
        }
        ++counts[outcome];
    }
    return ConfigurationSubspace::from_counts(
        n_qubits, counts, ConfigurationSubspace::Source::exact_state, max_k);
}

cplx matrix_element(const PauliSum& H, const BitVec& a, const BitVec& b) {
    if (a.size() != H.n_qubits() || b.size() != H.n_qubits())
        throw std::invalid_argument("bitstring width mismatch");
    const BitVec flips = a ^ b;
    cplx value{0.0, 0.0};
    for (const auto& [key, c] : H.terms()) {
        if (key.x != flips) continue;
        cplx contrib = c;
        switch (key.x.and_count(key.z) & 3u) {  // i^(#Y)
            case 1: contrib = {-contrib.imag(), contrib.real()}; break;
            case 2: contrib = -contrib; break;
            case 3: contrib = {contrib.imag(), -contrib.real()}; break;
            default: break;
        }
        if (key.z.and_parity(b)) contrib = -contrib;
        value += contrib;
    }
    return value;
}

QsciResult solve_subspace(const PauliSum& H,
                          const ConfigurationSubspace& subspace) {
    const std::size_t K = subspace.size();
    if (K == 0) throw std::invalid_argument("empty configuration subspace");
    if (subspace.n_qubits != H.n_qubits())
        throw std::invalid_argument("subspace width mismatch");
    if (!H.is_hermitian())
        throw std::invalid_argument("solve_subspace requires a Hermitian sum");

    // Bucket terms by x-block so only candidate terms are inspected per pair.
    std::map<BitVec, std::vector<PauliTerm>> buckets;
    for (const auto& [key, c] : H.terms())
        buckets[key.x].emplace_back(key.x, key.z, c);
    auto element = [&](const BitVec& a, const BitVec& b) -> cplx {
        auto it = buckets.find(a ^ b);
        if (it == buckets.end()) return {0.0, 0.0};
        cplx value{0.0, 0.0};
        for (const auto& t : it->second) {
            cplx contrib = t.coeff;
            switch (t.x.and_count(t.z) & 3u) {
                case 1: contrib = {-contrib.imag(), contrib.real()}; break;
                case 2: contrib = -contrib; break;
                case 3: contrib = {contrib.imag(), -contrib.real()}; break;
                default: break;
            }
            if (t.z.and_parity(b)) contrib = -contrib;
            value += contrib;
        }
        return value;
    };

    Eigen::MatrixXcd M(K, K);
    double herm_defect = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < K; ++l) {
            M(k, l) = element(subspace.configs[k], subspace.configs[l]);
        }
    }
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = k; l < K; ++l)
            herm_defect = std::max(herm_defect,
                                   std::abs(M(k, l) - std::conj(M(l, k))));
    if (herm_defect > 1e-10)
        throw std::runtime_error("projected matrix is not Hermitian; "
                                 "inconsistent Hamiltonian");

    QsciResult res;
    res.k_used = K;
    if (K <= kDenseSubspaceCap) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(M);
        res.energy = eig.eigenvalues()(0);
        res.eigenvector.resize(K);
        for (std::size_t k = 0; k < K; ++k)
            res.eigenvector[k] = eig.eigenvectors()(k, 0);
        res.gap = K > 1 ? eig.eigenvalues()(1) - eig.eigenvalues()(0) : 0.0;
    } else {
        // Iterative path for very large subspaces: power-free Lanczos on the
        // projected matrix via a thin local implementation.
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(K);
        v(0) = 1.0;
        const std::size_t mdim = std::min<std::size_t>(K, 64);
        Eigen::MatrixXcd basis(K, mdim);
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(mdim, mdim);
        double energy = 0.0;
        Eigen::VectorXcd ritz;
        for (int restart = 0; restart < 40; ++restart) {
            basis.col(0) = v / v.norm();
            std::size_t built = 1;
            for (std::size_t j = 0; j < mdim; ++j) {
                Eigen::VectorXcd w = M * basis.col(j);
                tri(j, j) = std::real(basis.col(j).dot(w));
                for (int pass = 0; pass < 2; ++pass)
                    for (std::size_t i = 0; i < built; ++i)
                        w -= basis.col(i) * basis.col(i).dot(w);
                const double beta = w.norm();
                if (j + 1 >= mdim || beta < 1e-14) break;
                tri(j, j + 1) = tri(j + 1, j) = beta;
                basis.col(j + 1) = w / beta;
                built = j + 2;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(
                tri.topLeftCorner(built, built));
            ritz = basis.leftCols(built) * small.eigenvectors().col(0).cast<cplx>();
            ritz.normalize();
            energy = small.eigenvalues()(0);
            res.gap = built > 1 ? small.eigenvalues()(1) - energy : 0.0;
            const double residual = (M * ritz - energy * ritz).norm();
            v = ritz;
            if (residual < 1e-9) break;
        }
        res.energy = energy;
        res.eigenvector.assign(ritz.data(), ritz.data() + K);
    }
    res.degenerate = K > 1 && res.gap < 1e-10;
    return res;
}

ConfigurationSubspace filter_particle_number(const ConfigurationSubspace& in,
                                             std::size_t particle_number) {
    ConfigurationSubspace out;
    out.n_qubits = in.n_qubits;
    out.source = in.source;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in.configs[i].count() == particle_number) {
            out.configs.push_back(in.configs[i]);
            out.counts.push_back(in.counts[i]);
        }
    }
    return out;
}

ConfigurationSubspace load_samples_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0;
    std::map<std::uint64_t, std::size_t> counts;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string bits;
        if (!(ls >> bits)) continue;
        std::size_t count = 0;
        if (!(ls >> count) || count == 0)
            throw std::runtime_error(path.string() + ":" +
                                     std::to_string(line_no) +
                                     ": expected 'bitstring count'");
        if (n == 0) n = bits.size();
        if (bits.size() != n)
            throw std::runtime_error(path.string() + ":" +
                                     std::to_string(line_no) +
                                     ": inconsistent bitstring width");
        counts[BitVec::from_string(bits).to_index()] += count;
    }
    if (counts.empty())
        throw std::runtime_error(path.string() + ": no samples found");
    return ConfigurationSubspace::from_counts(
        n, counts, ConfigurationSubspace::Source::file);
}

void save_samples_file(const std::filesystem::path& path,
                       const ConfigurationSubspace& subspace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < subspace.size(); ++i)
        out << subspace.configs[i].to_string() << " " << subspace.counts[i]
            << "\n";
}

QsciResult qsci_run(const PauliSum& H, const StateSource& source,
                    const QsciOptions& opts) {
    ConfigurationSubspace subspace;
    if (std::holds_alternative<ConfigurationSubspace>(source)) {
        subspace = std::get<ConfigurationSubspace>(source);
    } else {
        std::vector<cplx> amplitudes;
        if (std::holds_alternative<ExactGroundStateSource>(source)) {
            amplitudes = ground_state(H).amplitudes;
        } else {
            amplitudes = std::get<std::vector<cplx>>(source);
        }
        subspace = sample_configurations(amplitudes, H.n_qubits(), opts.shots,
                                         opts.noise_p, opts.seed, opts.max_k);
    }
    if (opts.filter_particle_number)
        subspace = filter_particle_number(subspace, *opts.filter_particle_number);
    if (subspace.size() == 0)
        throw std::runtime_error("no configurations survived filtering");
    QsciResult res = solve_subspace(H, subspace);
    res.shots = opts.shots;
    res.seed = opts.seed;
    return res;
}

}  // namespace qsw
