#include "force_kernels_row.hpp"

namespace provenir::simd {

void repulsion_scalar(const RepulsionInput& in, std::span<double> out_x, std::span<double> out_y) {
    for (std::size_t i = 0; i < in.x.size(); ++i) detail::repulsion_row(in, i, out_x[i], out_y[i]);
}

void limited_step_scalar(const StepInput& in, std::span<double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) detail::step_row(in, i, x[i], y[i]);
}

}  // namespace provenir::simd
