#include "qsw/pauli.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qsw {

namespace {

const double kHalfPi = std::numbers::pi / 2.0;

/// c * i^g with exact component swaps, g taken mod 4.
cplx times_i_power(cplx c, unsigned g) {
    switch (g & 3u) {
        case 0: return c;
        case 1: return {-c.imag(), c.real()};
        case 2: return -c;
        default: return {c.imag(), -c.real()};
    }
}

int pauli_rank(bool xb, bool zb) {
    // X < Y < Z < I
    if (xb && zb) return 1;
    if (xb) return 0;
    if (zb) return 2;
    return 3;
}

}  // namespace

std::string render_pauli(const PauliTerm& t) {
    std::string s(t.n_qubits(), 'I');
    for (std::size_t q = 0; q < t.n_qubits(); ++q) s[q] = t.pauli_char(q);
    return s;
}

std::string render_pauli_sparse(const PauliTerm& t) {
    std::string s;
    for (std::size_t q = 0; q < t.n_qubits(); ++q) {
        const char c = t.pauli_char(q);
        if (c == 'I') continue;
        if (!s.empty()) s += ' ';
        s += c;
        s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
}

PauliTerm parse_pauli(std::string_view text, std::size_t n_qubits) {
    BitVec x(n_qubits), z(n_qubits);
    if (text == "I")  // bare identity, any width (sparse renderer emits it)
        return PauliTerm(std::move(x), std::move(z));
    const bool sparse =
        text.find_first_of("0123456789") != std::string_view::npos;
    if (!sparse) {
        if (text.size() != n_qubits)
            throw std::invalid_argument(
                "pauli string length " + std::to_string(text.size()) +
                " does not match qubit count " + std::to_string(n_qubits));
        for (std::size_t q = 0; q < n_qubits; ++q) {
            switch (text[q]) {
                case 'I': break;
                case 'X': x.set(q); break;
                case 'Y': x.set(q); z.set(q); break;
                case 'Z': z.set(q); break;
                default:
                    throw std::invalid_argument(
                        std::string("invalid pauli character '") + text[q] +
                        "'");
            }
        }
        return PauliTerm(std::move(x), std::move(z));
    }
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        const char op = token[0];
        if (op != 'I' && op != 'X' && op != 'Y' && op != 'Z')
            throw std::invalid_argument(
                std::string("invalid pauli character '") + op + "'");
        std::size_t idx = 0;
        try {
            idx = std::stoul(token.substr(1));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed sparse pauli token '" +
                                        token + "'");
        }
        if (idx >= n_qubits)
            throw std::invalid_argument("qubit index " + std::to_string(idx) +
                                        " out of range for " +
                                        std::to_string(n_qubits) + " qubits");
        if (x.test(idx) || z.test(idx))
            throw std::invalid_argument("duplicate qubit index " +
                                        std::to_string(idx));
        if (op == 'X' || op == 'Y') x.set(idx);
        if (op == 'Z' || op == 'Y') z.set(idx);
    }
    return PauliTerm(std::move(x), std::move(z));
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("pauli width mismatch: " +
                                    std::to_string(a.n_qubits()) + " vs " +
                                    std::to_string(b.n_qubits()));
    // Per-qubit phases accumulated as an integer power of i:
    //   g = |Y(a)| + |Y(b)| + 2*|a.z & b.x| - |Y(ab)|  (mod 4)
    // derived from P(x,z) = i^(x.z) X^x Z^z composed qubit-wise.
    BitVec xr = a.x ^ b.x;
    BitVec zr = a.z ^ b.z;
    const std::size_t ya = a.x.and_count(a.z);
    const std::size_t yb = b.x.and_count(b.z);
    const std::size_t cross = a.z.and_count(b.x);
    const std::size_t yr = xr.and_count(zr);
    const unsigned g =
        static_cast<unsigned>((ya + yb + 2 * cross + 4 * a.n_qubits() - yr) & 3u);
    return PauliTerm(std::move(xr), std::move(zr),
                     times_i_power(a.coeff * b.coeff, g));
}

bool commutes(const PauliTerm& a, const PauliTerm& b) {
    if (a.n_qubits() != b.n_qubits())
        throw std::invalid_argument("pauli width mismatch: " +
                                    std::to_string(a.n_qubits()) + " vs " +
                                    std::to_string(b.n_qubits()));
    return a.x.and_parity(b.z) == a.z.and_parity(b.x);
}

bool support_major_less(const PauliTerm& a, const PauliTerm& b) {
    for (std::size_t q = 0; q < a.n_qubits(); ++q) {
        const int ra = pauli_rank(a.x.test(q), a.z.test(q));
        const int rb = pauli_rank(b.x.test(q), b.z.test(q));
        if (ra != rb) return ra < rb;
    }
    return false;
}

void RotationSequence::push(PauliTerm generator, double angle) {
    const double turns = angle / kHalfPi;
    const long k = std::lround(turns);
    const bool clifford =
        (k % 2 != 0) && std::abs(angle - k * kHalfPi) <= kAngleTolerance;
    generator.coeff = 1.0;
    rotations.push_back(Rotation{std::move(generator), angle, clifford});
}

void RotationSequence::push_clifford(PauliTerm generator, int quarter_turns) {
    if (quarter_turns % 2 == 0)
        throw std::invalid_argument("clifford rotation needs an odd quarter turn");
    generator.coeff = 1.0;
    rotations.push_back(
        Rotation{std::move(generator), quarter_turns * kHalfPi, true});
}

void PauliSum::add_term(const PauliTerm& t) {
    if (t.n_qubits() != n_)
        throw std::invalid_argument("term width " +
                                    std::to_string(t.n_qubits()) +
                                    " does not match sum width " +
                                    std::to_string(n_));
    Key key{t.x, t.z};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (std::abs(t.coeff) >= tol_) terms_.emplace(std::move(key), t.coeff);
        return;
    }
    it->second += t.coeff;
    if (std::abs(it->second) < tol_) terms_.erase(it);
}

bool PauliSum::is_hermitian(double tol) const {
    for (const auto& [key, c] : terms_)
        if (std::abs(c.imag()) > tol) return false;
    return true;
}

std::vector<PauliTerm> PauliSum::term_list() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [key, c] : terms_) out.emplace_back(key.x, key.z, c);
    return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.n_qubits() != n_)
        throw std::invalid_argument("sum width mismatch");
    for (const auto& [key, c] : other.terms_)
        add_term(PauliTerm(key.x, key.z, c));
    return *this;
}

std::string PauliSum::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.real();
        if (c.imag() != 0.0) out << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
        out << ")*" << render_pauli(PauliTerm(key.x, key.z));
    }
    return first ? "0" : out.str();
}

namespace {

/// Applies one rotation to a sum. Kept out of line so conjugate() reads as
/// the plain fold it is.
PauliSum apply_rotation(const PauliSum& H, const Rotation& rot) {
    if (rot.generator.n_qubits() != H.n_qubits())
        throw std::invalid_argument("rotation width mismatch");
    PauliSum out(H.n_qubits(), H.drop_tolerance());
    int quarter = 0;
    if (rot.clifford) {
        const long k = std::lround(rot.angle / kHalfPi);
        quarter = static_cast<int>(((k % 4) + 4) % 4);  // 1 or 3
    }
    for (const auto& [key, c] : H.terms()) {
        PauliTerm q(key.x, key.z, c);
        if (commutes(q, rot.generator)) {
            out.add_term(q);
            continue;
        }
        if (rot.clifford) {
            // sin(angle) is exactly +1 (quarter==1) or -1 (quarter==3).
            PauliTerm gq = multiply(rot.generator, q);
            gq.coeff = times_i_power(gq.coeff, quarter == 1 ? 1u : 3u);
            out.add_term(gq);
            continue;
        }
        const double cth = std::cos(rot.angle), sth = std::sin(rot.angle);
        out.add_term(q.with_coeff(c * cth));
        PauliTerm gq = multiply(rot.generator, q);
        gq.coeff = times_i_power(gq.coeff * sth, 1u);
        out.add_term(gq);
    }
    return out;
}

}  // namespace

PauliSum conjugate(const PauliSum& H, const RotationSequence& rot) {
    PauliSum cur = H;
    for (const auto& r : rot.rotations) cur = apply_rotation(cur, r);
    return cur;
}

double expectation_in_basis_state(const PauliSum& H, const BitVec& bits) {
    if (bits.size() != H.n_qubits())
        throw std::invalid_argument("bitstring width mismatch");
    if (!H.is_hermitian())
        throw std::invalid_argument(
            "expectation of a non-Hermitian sum is not real");
    double value = 0.0;
    for (const auto& [key, c] : H.terms()) {
        if (key.x.any()) continue;  // off-diagonal
        value += key.z.and_parity(bits) ? -c.real() : c.real();
    }
    return value;
}

}  // namespace qsw
