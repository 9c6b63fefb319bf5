#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace profusion {

// Fixed-size bitset over element indices of a small group.
class ElemSet {
public:
    ElemSet() = default;
    explicit ElemSet(std::size_t universe) : n_(universe), w_((universe + 63) / 64, 0) {}

    std::size_t universe() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    bool subset_of(const ElemSet& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    ElemSet operator&(const ElemSet& o) const {
        ElemSet r = *this;
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
        return r;
    }
    ElemSet operator|(const ElemSet& o) const {
        ElemSet r = *this;
        for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] |= o.w_[i];
        return r;
    }
    std::vector<std::uint32_t> elements() const {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t w = w_[i];
            while (w) {
                out.push_back(static_cast<std::uint32_t>(i * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }
    const std::vector<std::uint64_t>& words() const { return w_; }

    friend bool operator==(const ElemSet& a, const ElemSet& b) { return a.w_ == b.w_; }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct ElemSetHash {
    std::size_t operator()(const ElemSet& s) const noexcept { return s.hash(); }
};

}  // namespace profusion
