#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qsw {

/// Packed bit-vector over GF(2). Bit q addresses qubit q; qubit 0 is the
/// leftmost character of string renderings and the least significant
/// tracked index.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t n_bits)
        : n_(n_bits), w_((n_bits + 63) / 64, 0) {}

    static BitVec from_string(std::string_view s) {
        BitVec v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                v.set(i);
            } else if (s[i] != '0') {
                throw std::invalid_argument("bitstring must contain only 0/1: '" +
                                            std::string(s) + "'");
            }
        }
        return v;
    }

    /// Bit q of `index` becomes bit q of the vector (qubit 0 = LSB).
    static BitVec from_index(std::uint64_t index, std::size_t n_bits) {
        BitVec v(n_bits);
        if (n_bits > 0) {
            v.w_[0] = n_bits >= 64 ? index : (index & mask_last(n_bits));
        }
        return v;
    }

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const {
        return (w_[i / 64] >> (i % 64)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        const std::uint64_t bit = std::uint64_t{1} << (i % 64);
        if (value) {
            w_[i / 64] |= bit;
        } else {
            w_[i / 64] &= ~bit;
        }
    }

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    /// Parity of popcount(*this & other). No allocation.
    bool and_parity(const BitVec& other) const {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & other.w_[k];
        return std::popcount(acc) & 1u;
    }

    std::size_t and_count(const BitVec& other) const {
        std::size_t c = 0;
        for (std::size_t k = 0; k < w_.size(); ++k)
            c += std::popcount(w_[k] & other.w_[k]);
        return c;
    }

    BitVec operator^(const BitVec& o) const {
        BitVec r = *this;
        r ^= o;
        return r;
    }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }

    BitVec operator&(const BitVec& o) const {
        BitVec r = *this;
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
        return r;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.n_ == b.n_ && a.w_ == b.w_;
    }

    friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }

    /// Numeric order of the vector read as a little-endian integer
    /// (bit 0 least significant). Used for canonical term ordering.
    friend bool operator<(const BitVec& a, const BitVec& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        for (std::size_t k = a.w_.size(); k-- > 0;) {
            if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
        }
        return false;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    /// Little-endian integer value; requires size() <= 64.
    std::uint64_t to_index() const {
        if (n_ > 64) throw std::length_error("BitVec wider than 64 bits");
        return w_.empty() ? 0 : w_[0];
    }

    /// Keeps bits whose positions are NOT listed in `drop` (sorted, distinct),
    /// compacting the survivors in order.
    BitVec without_bits(const std::vector<std::size_t>& drop) const {
        BitVec r(n_ - drop.size());
        std::size_t out = 0, d = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (d < drop.size() && drop[d] == i) {
                ++d;
                continue;
            }
            if (test(i)) r.set(out);
            ++out;
        }
        return r;
    }

private:
    static std::uint64_t mask_last(std::size_t bits) {
        return bits % 64 == 0 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << (bits % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace qsw
