#include "profusion/permutation.hpp"

#include <sstream>

#include "profusion/config.hpp"

namespace profusion {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (Point x : images_) {
        if (x >= images_.size() || seen[x])
            throw InputError("permutation image array is not a bijection");
        seen[x] = 1;
    }
}

Permutation Permutation::identity(std::size_t degree) {
    if (degree == 0 || degree > 65535) throw InputError("permutation degree out of range");
    std::vector<Point> img(degree);
    for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<Point>(i);
    Permutation p;
    p.images_ = std::move(img);
    return p;
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<std::size_t>>& cycles) {
    Permutation p = identity(degree);
    std::vector<char> used(degree, 0);
    for (const auto& cyc : cycles) {
        for (std::size_t x : cyc) {
            if (x >= degree) throw InputError("cycle point " + std::to_string(x) + " >= degree");
            if (used[x]) throw InputError("point " + std::to_string(x) + " repeated in cycles");
            used[x] = 1;
        }
        for (std::size_t i = 0; i < cyc.size(); ++i)
            p.images_[cyc[i]] = static_cast<Point>(cyc[(i + 1) % cyc.size()]);
    }
    return p;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
    std::vector<Point> img(images_.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = images_[rhs.images_[i]];
    Permutation p;
    p.images_ = std::move(img);
    return p;
}

Permutation Permutation::inverse() const {
    std::vector<Point> img(images_.size());
    for (std::size_t i = 0; i < img.size(); ++i) img[images_[i]] = static_cast<Point>(i);
    Permutation p;
    p.images_ = std::move(img);
    return p;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
        if (images_[i] != i) return false;
    return true;
}

std::vector<std::vector<std::size_t>> Permutation::cycles() const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<char> seen(images_.size(), 0);
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i] || images_[i] == i) continue;
        std::vector<std::size_t> cyc;
        for (std::size_t x = i; !seen[x]; x = images_[x]) {
            seen[x] = 1;
            cyc.push_back(x);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

std::string Permutation::to_string() const {
    auto cyc = cycles();
    if (cyc.empty()) return "()";
    std::ostringstream os;
    for (const auto& c : cyc) {
        os << '(';
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
        os << ')';
    }
    return os.str();
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Point x : p.images()) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

}  // namespace profusion
