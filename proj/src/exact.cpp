#include "qsw/exact.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

namespace qsw {

namespace {

constexpr std::size_t kGroundStateQubitCap = 24;

struct CompiledTerm {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    cplx prefactor;  // coeff * i^(#Y)
};

std::vector<CompiledTerm> compile_terms(const PauliSum& H) {
    if (H.n_qubits() > 63)
        throw std::invalid_argument("state-vector path limited to 63 qubits");
    std::vector<CompiledTerm> out;
    out.reserve(H.n_terms());
    for (const auto& [key, c] : H.terms()) {
        CompiledTerm t;
        t.x = key.x.to_index();
        t.z = key.z.to_index();
        cplx p = c;
        switch (key.x.and_count(key.z) & 3u) {
            case 1: p = {-p.imag(), p.real()}; break;
            case 2: p = -p; break;
            case 3: p = {p.imag(), -p.real()}; break;
            default: break;
        }
        t.prefactor = p;
        out.push_back(t);
    }
    return out;
}

void apply_compiled(const std::vector<CompiledTerm>& terms,
                    std::span<const cplx> in, std::span<cplx> out) {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
    const std::size_t dim = in.size();
    for (const auto& t : terms) {
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx v = in[j];
            if (v == cplx{0.0, 0.0}) continue;
            const bool neg = std::popcount(t.z & j) & 1u;
            out[j ^ t.x] += neg ? -t.prefactor * v : t.prefactor * v;
        }
    }
}

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return std::sqrt(s);
}

/// Lowest eigenpair of a Hermitian operator given only its action,
/// via restarted Lanczos with full reorthogonalization.
template <class MatVec>
GroundStateResult lanczos_lowest(std::size_t dim, MatVec&& matvec,
                                 std::vector<cplx> v0,
                                 const LanczosOptions& opts) {
    GroundStateResult res;
    const std::size_t m = std::min(opts.krylov_dim, dim);
    const double nrm0 = norm(v0);
    if (nrm0 == 0.0) throw std::invalid_argument("zero start vector");
    for (auto& a : v0) a /= nrm0;

    std::vector<std::vector<cplx>> basis;
    std::vector<cplx> w(dim);
    std::vector<cplx> current = std::move(v0);

    for (std::size_t restart = 0; restart < opts.max_restarts; ++restart) {
        basis.clear();
        basis.push_back(current);
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        std::size_t built = 1;
        for (std::size_t j = 0; j < m; ++j) {
            matvec(std::span<const cplx>(basis[j]), std::span<cplx>(w));
            // alpha_j, then orthogonalize against the whole basis (twice).
            cplx alpha{0.0, 0.0};
            for (std::size_t i = 0; i < dim; ++i)
                alpha += std::conj(basis[j][i]) * w[i];
            tri(j, j) = alpha.real();
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : basis) {
                    cplx ip{0.0, 0.0};
                    for (std::size_t i = 0; i < dim; ++i)
                        ip += std::conj(b[i]) * w[i];
                    if (ip != cplx{0.0, 0.0})
                        for (std::size_t i = 0; i < dim; ++i) w[i] -= ip * b[i];
                }
            }
            const double beta = norm(w);
            if (j + 1 < m) {
                if (beta < 1e-14) break;  // invariant subspace found
                tri(j, j + 1) = tri(j + 1, j) = beta;
                std::vector<cplx> next(dim);
                for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / beta;
                basis.push_back(std::move(next));
                built = j + 2;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            tri.topLeftCorner(built, built));
        const Eigen::VectorXd& evals = eig.eigenvalues();
        const Eigen::VectorXd coeffs = eig.eigenvectors().col(0);

        std::vector<cplx> ritz(dim, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < built; ++j)
            for (std::size_t i = 0; i < dim; ++i)
                ritz[i] += coeffs(j) * basis[j][i];
        const double rn = norm(ritz);
        for (auto& a : ritz) a /= rn;

        matvec(std::span<const cplx>(ritz), std::span<cplx>(w));
        const double energy = evals(0);
        double rsq = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            rsq += std::norm(w[i] - energy * ritz[i]);
        res.energy = energy;
        res.amplitudes = ritz;
        res.residual = std::sqrt(rsq);
        res.gap = built > 1 ? evals(1) - evals(0) : 0.0;
        res.iterations = restart + 1;
        if (res.residual <= opts.residual_tol || built == dim) {
            res.converged = res.residual <= opts.residual_tol;
            return res;
        }
        current = res.amplitudes;
    }
    res.converged = res.residual <= opts.residual_tol;
    return res;
}

}  // namespace

std::size_t dense_qubit_cap() {
    if (const char* env = std::getenv("QSW_DENSE_QUBIT_CAP")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 14;
}

void apply_pauli_sum(const PauliSum& H, std::span<const cplx> in,
                     std::span<cplx> out) {
    const std::size_t dim = std::size_t{1} << H.n_qubits();
    if (in.size() != dim || out.size() != dim)
        throw std::invalid_argument("state vector dimension mismatch");
    apply_compiled(compile_terms(H), in, out);
}

std::vector<cplx> apply_pauli_sum(const PauliSum& H,
                                  const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size());
    apply_pauli_sum(H, std::span<const cplx>(v), std::span<cplx>(out));
    return out;
}

SpectrumResult dense_spectrum(const PauliSum& H, bool want_ground_vector) {
    if (H.n_qubits() > dense_qubit_cap())
        throw std::invalid_argument(
            "dense diagonalization capped at " +
            std::to_string(dense_qubit_cap()) + " qubits (got " +
            std::to_string(H.n_qubits()) + "); set QSW_DENSE_QUBIT_CAP to raise");
    if (!H.is_hermitian())
        throw std::invalid_argument("dense_spectrum requires a Hermitian sum");
    const std::size_t dim = std::size_t{1} << H.n_qubits();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : compile_terms(H)) {
        for (std::size_t j = 0; j < dim; ++j) {
            const bool neg = std::popcount(t.z & j) & 1u;
            M(j ^ t.x, j) += neg ? -t.prefactor : t.prefactor;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        M, want_ground_vector ? Eigen::ComputeEigenvectors
                              : Eigen::EigenvaluesOnly);
    SpectrumResult res;
    res.method = SpectrumMethod::dense;
    res.eigenvalues.assign(eig.eigenvalues().data(),
                           eig.eigenvalues().data() + dim);
    if (dim > 1) res.gap = res.eigenvalues[1] - res.eigenvalues[0];
    if (want_ground_vector) {
        res.ground_vector.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            res.ground_vector[i] = eig.eigenvectors()(i, 0);
    }
    return res;
}

GroundStateResult ground_state(const PauliSum& H, const LanczosOptions& opts) {
    if (H.n_qubits() > kGroundStateQubitCap)
        throw std::invalid_argument("iterative ground state capped at " +
                                    std::to_string(kGroundStateQubitCap) +
                                    " qubits");
    if (!H.is_hermitian())
        throw std::invalid_argument("ground_state requires a Hermitian sum");
    const std::size_t dim = std::size_t{1} << H.n_qubits();
    if (H.empty()) {
        GroundStateResult res;
        res.amplitudes.assign(dim, cplx{0.0, 0.0});
        res.amplitudes[0] = 1.0;
        res.converged = true;
        return res;
    }
    const auto terms = compile_terms(H);

    // Deterministic start: reference spike plus a seeded perturbation so the
    // start overlaps every symmetry sector.
    std::vector<cplx> v0(dim);
    std::mt19937_64 rng(opts.start_seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& a : v0) a = {u(rng), u(rng)};
    const double pn = norm(v0);
    for (auto& a : v0) a *= 0.05 / pn;
    v0[opts.reference_index.value_or(0) & (dim - 1)] += 1.0;

    return lanczos_lowest(
        dim,
        [&terms](std::span<const cplx> in, std::span<cplx> out) {
            apply_compiled(terms, in, out);
        },
        std::move(v0), opts);
}

}  // namespace qsw
