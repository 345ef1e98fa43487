#pragma once

// Force-directed layouts for collaboration subgraphs. Both algorithms are pure
// functions of (graph, params): node order is ascending id, initial positions
// come from a seeded mt19937_64, and the force loops use fixed reduction order.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "provenir/prov_graph.hpp"
#include "provenir/simd/force_kernels.hpp"

namespace provenir {

enum class LayoutAlgorithm { FruchtermanReingold, ForceAtlas2 };

struct LayoutParams {
    LayoutAlgorithm algorithm = LayoutAlgorithm::FruchtermanReingold;
    int iterations = 500;
    double width = 1000.0;
    double height = 1000.0;
    std::uint64_t seed = 42;
    double fr_optimal_distance = 1.0;  // C in k = C * sqrt(W*H/n)
    double fa2_scaling = 2.0;          // k_r
    double fa2_gravity = 1.0;          // g
    /// Kernel level; unset uses the runtime-detected one.
    std::optional<simd::Level> simd_level;

    void check() const;  // throws Error(InvalidArgument)
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

using Positions = std::map<std::string, Vec2>;

/// Called after every iteration with the current coordinates (node order is
/// ascending id) and, for FR, the temperature that capped that iteration.
using LayoutObserver =
    std::function<void(int iteration, std::span<const double> x, std::span<const double> y, double temperature)>;

Positions layout_fr(const ProvGraph& graph, const LayoutParams& params, const LayoutObserver& observer = {});
Positions layout_fa2(const ProvGraph& graph, const LayoutParams& params, const LayoutObserver& observer = {});
Positions compute_layout(const ProvGraph& graph, const LayoutParams& params);

/// FR temperature for `iteration` (0-based): W/10 cooled linearly toward 0.
double fr_temperature(const LayoutParams& params, int iteration);

std::string_view to_string(LayoutAlgorithm algorithm) noexcept;
std::optional<LayoutAlgorithm> parse_layout_algorithm(std::string_view text) noexcept;

}  // namespace provenir
