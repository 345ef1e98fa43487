#pragma once

// Per-node scalar bodies shared by the reference kernel and the tails of the
// vector kernels.

#include <cmath>
#include <cstddef>

#include "provenir/simd/force_kernels.hpp"

namespace provenir::simd::detail {

inline void repulsion_row(const RepulsionInput& in, std::size_t i, double& out_x, double& out_y) {
    const std::size_t n = in.x.size();
    const double min_d2 = in.min_distance * in.min_distance;
    const double scaled_wi = in.coefficient * in.weight[i];
    double acc_x = 0.0;
    double acc_y = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double ddx = in.x[i] - in.x[j];
        double ddy = in.y[i] - in.y[j];
        double d2 = ddx * ddx + ddy * ddy;
        if (d2 < min_d2) {
            ddx = i < j ? -in.min_distance : in.min_distance;
            ddy = 0.0;
            d2 = min_d2;
        }
        const double f = scaled_wi * in.weight[j] / d2;
        acc_x = acc_x + ddx * f;
        acc_y = acc_y + ddy * f;
    }
    out_x = acc_x;
    out_y = acc_y;
}

// Ternaries mirror the operand order of vmaxpd/vminpd so signed zeros agree.
inline double clamp_to(double value, double upper) {
    const double low = 0.0 > value ? 0.0 : value;
    return upper < low ? upper : low;
}

inline void step_row(const StepInput& in, std::size_t i, double& x, double& y) {
    const double dx = in.dx[i];
    const double dy = in.dy[i];
    const double length = std::sqrt(dx * dx + dy * dy);
    const double scale = length > in.max_step ? in.max_step / length : 1.0;
    x = clamp_to(x + dx * scale, in.width);
    y = clamp_to(y + dy * scale, in.height);
}

}  // namespace provenir::simd::detail
