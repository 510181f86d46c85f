#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsw/bitvec.hpp"

namespace qsw {

using cplx = std::complex<double>;

/// Everything in this file is immutable after construction in spirit:
/// operations return new values and never mutate their inputs, so values
/// are safe to share across threads.

inline constexpr double kDefaultDropTolerance = 1e-12;

/// One N-qubit Pauli string in symplectic form with a complex coefficient.
/// Qubit q carries I iff (x=0,z=0), X iff (1,0), Z iff (0,1), Y iff (1,1).
struct PauliTerm {
    BitVec x;
    BitVec z;
    cplx coeff{1.0, 0.0};

    PauliTerm() = default;
    PauliTerm(BitVec x_block, BitVec z_block, cplx c = {1.0, 0.0})
        : x(std::move(x_block)), z(std::move(z_block)), coeff(c) {
        if (x.size() != z.size())
            throw std::invalid_argument("x and z blocks differ in length");
    }

    std::size_t n_qubits() const { return x.size(); }

    bool is_identity_string() const { return x.none() && z.none(); }

    char pauli_char(std::size_t q) const {
        const bool xb = x.test(q), zb = z.test(q);
        if (xb && zb) return 'Y';
        if (xb) return 'X';
        if (zb) return 'Z';
        return 'I';
    }

    PauliTerm with_coeff(cplx c) const { return PauliTerm(x, z, c); }
};

/// Dense form, e.g. "XIZY" (qubit 0 leftmost).
std::string render_pauli(const PauliTerm& t);

/// Sparse form, e.g. "X0 Z2 Y3"; identity renders as "I".
std::string render_pauli_sparse(const PauliTerm& t);

/// Accepts the dense form ("XIZY", length must equal n_qubits) and the
/// sparse form ("X0 Z2 Y3"). Coefficient of the result is 1.
PauliTerm parse_pauli(std::string_view text, std::size_t n_qubits);

/// Product a*b with the exact accumulated power-of-i phase.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// True iff the symplectic form (a.x·b.z + a.z·b.x) vanishes mod 2.
bool commutes(const PauliTerm& a, const PauliTerm& b);

/// Ordering used when a deterministic representative has to be picked from
/// a set of strings: compare qubit by qubit from qubit 0, with X < Y < Z < I.
/// A string acting earlier (and with "smaller" operator) sorts first.
bool support_major_less(const PauliTerm& a, const PauliTerm& b);

/// One exponentiated-Pauli rotation exp(i*angle*G/2), G a unit-coefficient
/// Pauli string. Conjugation acts as H -> U H U^dagger.
struct Rotation {
    PauliTerm generator;
    double angle = 0.0;
    bool clifford = false;  // true iff angle is an odd multiple of pi/2
};

/// Ordered list of rotations; entry 0 is applied to the operator first.
struct RotationSequence {
    static constexpr double kAngleTolerance = 1e-9;

    std::vector<Rotation> rotations;

    std::size_t size() const { return rotations.size(); }
    bool empty() const { return rotations.empty(); }

    /// Detects the Clifford flag from the angle.
    void push(PauliTerm generator, double angle);

    /// Exact pi/2 rotation: angle = quarter_turns * pi/2, quarter_turns odd.
    void push_clifford(PauliTerm generator, int quarter_turns);

    void append(const RotationSequence& other) {
        rotations.insert(rotations.end(), other.rotations.begin(),
                         other.rotations.end());
    }
};

/// A Hamiltonian: deduplicated map from Pauli strings to complex
/// coefficients. Terms with |coefficient| below the drop tolerance are
/// removed on insertion.
class PauliSum {
public:
    struct Key {
        BitVec x;
        BitVec z;
        friend bool operator<(const Key& a, const Key& b) {
            if (a.x != b.x) return a.x < b.x;
            return a.z < b.z;
        }
        friend bool operator==(const Key& a, const Key& b) {
            return a.x == b.x && a.z == b.z;
        }
    };
    using TermMap = std::map<Key, cplx>;

    explicit PauliSum(std::size_t n_qubits,
                      double drop_tolerance = kDefaultDropTolerance)
        : n_(n_qubits), tol_(drop_tolerance) {}

    std::size_t n_qubits() const { return n_; }
    std::size_t n_terms() const { return terms_.size(); }
    double drop_tolerance() const { return tol_; }
    bool empty() const { return terms_.empty(); }

    const TermMap& terms() const { return terms_; }

    /// Merges the coefficient into the matching entry; drops entries whose
    /// merged magnitude falls below the drop tolerance.
    void add_term(const PauliTerm& t);

    void add(std::string_view pauli, cplx c) {
        PauliTerm t = parse_pauli(pauli, n_);
        t.coeff = c;
        add_term(t);
    }

    cplx coefficient(const PauliTerm& t) const {
        auto it = terms_.find(Key{t.x, t.z});
        return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
    }

    cplx coefficient(std::string_view pauli) const {
        return coefficient(parse_pauli(pauli, n_));
    }

    /// Pauli strings are Hermitian, so the sum is Hermitian iff every
    /// coefficient is real (within tol).
    bool is_hermitian(double tol = 1e-10) const;

    std::vector<PauliTerm> term_list() const;

    PauliSum& operator+=(const PauliSum& other);

    std::string to_string() const;

private:
    std::size_t n_;
    double tol_;
    TermMap terms_;
};

/// Conjugates H by the rotation sequence, entry 0 first. For each rotation
/// exp(i*angle*G/2): a term Q commuting with G is unchanged; an anticommuting
/// term hQ maps to h*cos(angle)*Q + h*sin(angle)*(i*G*Q). Clifford-flagged
/// entries use exact integer arithmetic for the sine so one Pauli maps to
/// exactly one Pauli.
PauliSum conjugate(const PauliSum& H, const RotationSequence& rot);

/// <bits|H|bits> for a computational-basis state. Terms with any X/Y content
/// contribute zero; bit value 1 maps to Z eigenvalue -1.
double expectation_in_basis_state(const PauliSum& H, const BitVec& bits);

inline double expectation_in_basis_state(const PauliSum& H,
                                          std::string_view bits) {
    return expectation_in_basis_state(H, BitVec::from_string(bits));
}

}  // namespace qsw
