#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ltg {

/// Fixed-universe set of element indices backed by 64-bit words.
/// The universe size is fixed at construction; all binary operations
/// require operands over the same universe.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(int universe)
        : nbits_(universe), words_((universe + 63) / 64, 0) {
        if (universe < 0) throw std::invalid_argument("negative universe");
    }

    static Bitset full(int universe) {
        Bitset b(universe);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    int universe_size() const { return nbits_; }

    bool test(int i) const {
        return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
    }

    void set(int i) { words_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    bool any() const { return !empty(); }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    /// Removes every member of `o`.
    Bitset& subtract(const Bitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { a &= b; return a; }
    friend Bitset operator|(Bitset a, const Bitset& b) { a |= b; return a; }
    friend Bitset operator-(Bitset a, const Bitset& b) { a.subtract(b); return a; }

    Bitset complement() const {
        Bitset r(nbits_);
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = ~words_[k];
        r.trim();
        return r;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }

    bool subset_of(const Bitset& o) const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }

    bool operator==(const Bitset& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    /// Total order used wherever canonical output order is required:
    /// numeric comparison with element 0 as the least significant bit.
    bool operator<(const Bitset& o) const {
        for (std::size_t k = words_.size(); k-- > 0;)
            if (words_[k] != o.words_[k]) return words_[k] < o.words_[k];
        return false;
    }

    /// Index of the lowest member, or -1 when empty.
    int first() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return static_cast<int>(k * 64 + __builtin_ctzll(words_[k]));
        return -1;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                f(static_cast<int>(k * 64 + __builtin_ctzll(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<int> indices() const {
        std::vector<int> v;
        v.reserve(static_cast<std::size_t>(count()));
        for_each([&](int i) { v.push_back(i); });
        return v;
    }

    std::uint64_t word(std::size_t k) const { return k < words_.size() ? words_[k] : 0; }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(nbits_);
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    void trim() {
        if (nbits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (nbits_ % 64)) - 1;
    }

    int nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

} // namespace ltg
