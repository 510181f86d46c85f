#pragma once

// Test-only dense oracle. Everything here is built from rendered Pauli
// strings and hard-coded 2x2 matrices via Kronecker products, independent of
// the bit-level algebra it is used to check. Qubit 0 is the least
// significant bit of the matrix index.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "qsw/pauli.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using qsw::cplx;

inline Mat single(char op) {
    Mat m(2, 2);
    const cplx i{0.0, 1.0};
    switch (op) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad pauli char");
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

/// Matrix of a dense Pauli string; character q acts on index bit q.
inline Mat pauli_matrix(const std::string& dense) {
    Mat m = single(dense.empty() ? 'I' : dense[0]);
    if (dense.empty()) return Mat::Identity(1, 1);
    for (std::size_t q = 1; q < dense.size(); ++q)
        m = kron(single(dense[q]), m).eval();
    return m;
}

inline Mat to_matrix(const qsw::PauliSum& H) {
    const std::size_t dim = std::size_t{1} << H.n_qubits();
    Mat m = Mat::Zero(dim, dim);
    for (const auto& [key, c] : H.terms())
        m += c * pauli_matrix(qsw::render_pauli(qsw::PauliTerm(key.x, key.z)));
    return m;
}

inline std::vector<double> spectrum(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
    return std::vector<double>(eig.eigenvalues().data(),
                               eig.eigenvalues().data() + m.rows());
}

inline std::vector<double> spectrum(const qsw::PauliSum& H) {
    return spectrum(to_matrix(H));
}

/// Embeds a single-qubit operator at position q of an n-qubit register.
inline Mat embed(std::size_t n, std::size_t q, const Mat& a) {
    Mat m = Mat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k)
        m = kron(k == q ? a : single('I'), m).eval();
    return m;
}

/// Product of single-qubit projectors (I + sector*P)/2 over the given
/// qubits.
inline Mat projector(std::size_t n, const std::vector<std::size_t>& qubits,
                     const std::vector<int>& sectors,
                     const std::vector<char>& bases) {
    const std::size_t dim = std::size_t{1} << n;
    Mat p = Mat::Identity(dim, dim);
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const Mat factor =
            0.5 * (Mat::Identity(dim, dim) +
                   double(sectors[i]) * embed(n, qubits[i], single(bases[i])));
        p = (p * factor).eval();
    }
    return p;
}

/// Traces out the listed qubits (sorted ascending); remaining qubits keep
/// their relative order.
inline Mat partial_trace(const Mat& m, std::size_t n,
                         const std::vector<std::size_t>& traced) {
    std::vector<std::size_t> kept;
    for (std::size_t q = 0; q < n; ++q)
        if (std::find(traced.begin(), traced.end(), q) == traced.end())
            kept.push_back(q);
    const std::size_t kd = std::size_t{1} << kept.size();
    const std::size_t td = std::size_t{1} << traced.size();
    auto full_index = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (kept_bits >> i & 1) idx |= std::size_t{1} << kept[i];
        for (std::size_t i = 0; i < traced.size(); ++i)
            if (traced_bits >> i & 1) idx |= std::size_t{1} << traced[i];
        return idx;
    };
    Mat out = Mat::Zero(kd, kd);
    for (std::size_t r = 0; r < kd; ++r)
        for (std::size_t c = 0; c < kd; ++c)
            for (std::size_t t = 0; t < td; ++t)
                out(r, c) += m(full_index(r, t), full_index(c, t));
    return out;
}

/// Unitary realizing qsw::conjugate with the same ordering convention:
/// entry 0 acts on the operator first, so U = U_m ... U_1 with
/// U_j = cos(angle/2) I + i sin(angle/2) G_j.
inline Mat rotation_unitary(std::size_t n, const qsw::RotationSequence& seq) {
    const std::size_t dim = std::size_t{1} << n;
    Mat u = Mat::Identity(dim, dim);
    for (const auto& rot : seq.rotations) {
        const Mat g = pauli_matrix(qsw::render_pauli(rot.generator));
        const Mat step = std::cos(rot.angle / 2) * Mat::Identity(dim, dim) +
                         cplx{0.0, 1.0} * std::sin(rot.angle / 2) * g;
        u = (step * u).eval();
    }
    return u;
}

}  // namespace oracle
