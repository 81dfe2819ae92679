#pragma once

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tjsolve {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt3 = std::numbers::sqrt3;

/// Sheet label in {1, 2, 3} with cyclic neighbours.
class TripleIndex {
public:
    constexpr explicit TripleIndex(int i) : i_(i) {
        if (i < 1 || i > 3) {
            throw std::out_of_range("TripleIndex must be 1, 2 or 3, got " + std::to_string(i));
        }
    }

    [[nodiscard]] constexpr int value() const noexcept { return i_; }
    [[nodiscard]] constexpr std::size_t slot() const noexcept { return static_cast<std::size_t>(i_ - 1); }

    [[nodiscard]] constexpr TripleIndex succ() const { return TripleIndex(i_ % 3 + 1); }
    [[nodiscard]] constexpr TripleIndex pred() const { return TripleIndex((i_ + 1) % 3 + 1); }

    [[nodiscard]] static constexpr std::array<TripleIndex, 3> all() {
        return {TripleIndex(1), TripleIndex(2), TripleIndex(3)};
    }

    friend constexpr bool operator==(TripleIndex a, TripleIndex b) noexcept { return a.i_ == b.i_; }

private:
    int i_;
};

/// Outward directions n_i of the three half-planes of Y and their normals
/// nu_i (n_i rotated counterclockwise by a quarter turn).
struct JunctionFrame {
    std::array<Vec2, 3> n;
    std::array<Vec2, 3> nu;

    [[nodiscard]] const Vec2& conormal(TripleIndex i) const { return n[i.slot()]; }
    [[nodiscard]] const Vec2& normal(TripleIndex i) const { return nu[i.slot()]; }
};

[[nodiscard]] inline JunctionFrame frame_vectors() {
    constexpr double h = sqrt3 / 2.0;
    JunctionFrame f;
    f.n = {Vec2(-1.0, 0.0), Vec2(0.5, -h), Vec2(0.5, h)};
    f.nu = {Vec2(0.0, -1.0), Vec2(h, 0.5), Vec2(-h, 0.5)};
    return f;
}

} // namespace tjsolve
