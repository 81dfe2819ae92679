#pragma once

#include <stdexcept>
#include <string>

namespace tjsolve {

struct CutoffValues {
    double eta;
    double d1;
    double d2;
};

/// C^2 cutoff: 1 on [0, delta], 0 on [2 delta, 1], quintic smoothstep in between.
/// Peak slope is 15 / (8 delta).
class CutoffProfile {
public:
    explicit CutoffProfile(double delta = 0.25) : delta_(delta) {
        if (!(delta > 0.0 && delta < 0.5)) {
            throw std::invalid_argument("cutoff delta must lie in (0, 1/2), got " + std::to_string(delta));
        }
    }

    [[nodiscard]] double delta() const noexcept { return delta_; }

    [[nodiscard]] CutoffValues eval(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::out_of_range("cutoff evaluated outside [0,1]: x = " + std::to_string(x));
        }
        if (x <= delta_) return {1.0, 0.0, 0.0};
        if (x >= 2.0 * delta_) return {0.0, 0.0, 0.0};
        // t runs from 1 at x = delta down to 0 at x = 2 delta.
        const double t = (2.0 * delta_ - x) / delta_;
        const double t2 = t * t;
        const double s = t2 * t * (10.0 + t * (-15.0 + 6.0 * t));
        const double ds = 30.0 * t2 * (1.0 - t) * (1.0 - t);
        const double dds = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
        return {s, -ds / delta_, dds / (delta_ * delta_)};
    }

    [[nodiscard]] double max_slope() const noexcept { return 15.0 / (8.0 * delta_); }

private:
    double delta_;
};

} // namespace tjsolve
