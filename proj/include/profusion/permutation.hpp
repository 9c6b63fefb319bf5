#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace profusion {

using Point = std::uint16_t;

// A bijection of {0, ..., degree-1}. Composition is right-to-left:
// (a * b)(x) = a(b(x)).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<Point> images);

    static Permutation identity(std::size_t degree);
    static Permutation from_cycles(std::size_t degree,
                                   const std::vector<std::vector<std::size_t>>& cycles);

    std::size_t degree() const { return images_.size(); }
    Point operator[](std::size_t i) const { return images_[i]; }
    const std::vector<Point>& images() const { return images_; }

    Permutation operator*(const Permutation& rhs) const;
    Permutation inverse() const;
    bool is_identity() const;

    std::vector<std::vector<std::size_t>> cycles() const;
    std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<Point> images_;
};

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept;
};

}  // namespace profusion
