#pragma once

// Data-parallel inner loops of the force-directed layouts.
//
// Every variant must be bit-identical to the scalar reference: the AVX2 kernels
// vectorize across target nodes (4 lanes) and walk source nodes sequentially,
// so each lane performs exactly the scalar operation sequence. Build with
// -ffp-contract=off.

#include <cstddef>
#include <span>
#include <string_view>

namespace provenir::simd {

enum class Level { Scalar, Avx2 };

std::string_view to_string(Level level) noexcept;

/// out_x[i], out_y[i] = sum over j != i of delta_ij * coefficient*w[i]*w[j] / |delta_ij|^2
/// where delta_ij = p_i - p_j. Pairs closer than `min_distance` use
/// delta = (+-min_distance, 0), sign negative when i < j.
struct RepulsionInput {
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> weight;
    double coefficient = 1.0;
    double min_distance = 1e-2;
};

/// Moves each node by its displacement, shortened to `max_step` when longer,
/// then clamps into [0, width] x [0, height].
struct StepInput {
    std::span<const double> dx;
    std::span<const double> dy;
    double max_step = 0.0;
    double width = 0.0;
    double height = 0.0;
};

using RepulsionFn = void (*)(const RepulsionInput&, std::span<double> out_x, std::span<double> out_y);
using StepFn = void (*)(const StepInput&, std::span<double> x, std::span<double> y);

struct Kernels {
    Level level;
    RepulsionFn repulsion;
    StepFn limited_step;
};

void repulsion_scalar(const RepulsionInput& in, std::span<double> out_x, std::span<double> out_y);
void limited_step_scalar(const StepInput& in, std::span<double> x, std::span<double> y);

#if defined(PROVENIR_HAVE_AVX2)
void repulsion_avx2(const RepulsionInput& in, std::span<double> out_x, std::span<double> out_y);
void limited_step_avx2(const StepInput& in, std::span<double> x, std::span<double> y);
#endif

/// Highest level both compiled in and supported by this CPU.
Level detected_level() noexcept;

/// detected_level(), lowered by PROVENIR_SIMD=scalar in the environment.
Level default_level() noexcept;

/// Kernel table for `level`; falls back to scalar when unavailable.
const Kernels& kernels(Level level) noexcept;
const Kernels& kernels() noexcept;

bool available(Level level) noexcept;

}  // namespace provenir::simd
