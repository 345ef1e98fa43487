#include "provenir/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <vector>

namespace provenir {

namespace {

struct IndexedGraph {
    std::vector<std::string> ids;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // self-loops dropped
    std::vector<double> degree;
};

IndexedGraph index_graph(const ProvGraph& graph) {
    IndexedGraph g;
    std::unordered_map<std::string, std::size_t> position;
    for (const ProvNode* node : graph.sorted_nodes()) {
        position.emplace(node->id, g.ids.size());
        g.ids.push_back(node->id);
    }
    g.degree.assign(g.ids.size(), 0.0);
    for (const ProvEdge* edge : graph.sorted_edges()) {
        auto s = position.find(edge->source);
        auto t = position.find(edge->target);
        if (s == position.end() || t == position.end() || s->second == t->second) continue;
        g.edges.emplace_back(s->second, t->second);
        g.degree[s->second] += 1.0;
        g.degree[t->second] += 1.0;
    }
    return g;
}

// Uniform [0,1) from the top 53 bits; identical on every platform, unlike
// std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void random_positions(const LayoutParams& params, std::size_t n, std::vector<double>& x, std::vector<double>& y) {
    std::mt19937_64 rng(params.seed);
    x.resize(n);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = unit_draw(rng) * params.width;
        y[i] = unit_draw(rng) * params.height;
    }
}

Positions to_positions(const IndexedGraph& g, const std::vector<double>& x, const std::vector<double>& y) {
    Positions out;
    for (std::size_t i = 0; i < g.ids.size(); ++i) out.emplace(g.ids[i], Vec2{x[i], y[i]});
    return out;
}

const simd::Kernels& kernels_for(const LayoutParams& params) {
    return params.simd_level ? simd::kernels(*params.simd_level) : simd::kernels();
}

// Uniformly scales the drawing into the frame, keeping a 5% margin.
void fit_to_frame(const LayoutParams& params, std::vector<double>& x, std::vector<double>& y) {
    constexpr double kMargin = 0.05;
    const double cx = params.width / 2.0;
    const double cy = params.height / 2.0;
    const auto [min_x, max_x] = std::minmax_element(x.begin(), x.end());
    const auto [min_y, max_y] = std::minmax_element(y.begin(), y.end());
    const double span_x = *max_x - *min_x;
    const double span_y = *max_y - *min_y;
    const double mid_x = (*max_x + *min_x) / 2.0;
    const double mid_y = (*max_y + *min_y) / 2.0;
    double scale = std::numeric_limits<double>::infinity();
    if (span_x > 0.0) scale = std::min(scale, params.width * (1.0 - 2.0 * kMargin) / span_x);
    if (span_y > 0.0) scale = std::min(scale, params.height * (1.0 - 2.0 * kMargin) / span_y);
    if (!std::isfinite(scale)) scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(cx + (x[i] - mid_x) * scale, 0.0, params.width);
        y[i] = std::clamp(cy + (y[i] - mid_y) * scale, 0.0, params.height);
    }
}

}  // namespace

void LayoutParams::check() const {
    if (iterations < 1) throw Error(Errc::InvalidArgument, "iterations must be >= 1");
    if (!(width > 0.0) || !(height > 0.0)) throw Error(Errc::InvalidArgument, "frame width and height must be > 0");
    if (!(fr_optimal_distance > 0.0)) throw Error(Errc::InvalidArgument, "FR optimal-distance coefficient must be > 0");
    if (!(fa2_scaling > 0.0)) throw Error(Errc::InvalidArgument, "FA2 scaling must be > 0");
    if (!(fa2_gravity >= 0.0)) throw Error(Errc::InvalidArgument, "FA2 gravity must be >= 0");
}

std::string_view to_string(LayoutAlgorithm algorithm) noexcept {
    return algorithm == LayoutAlgorithm::ForceAtlas2 ? "fa2" : "fr";
}

std::optional<LayoutAlgorithm> parse_layout_algorithm(std::string_view text) noexcept {
    if (text == "fr" || text == "fruchterman_reingold") return LayoutAlgorithm::FruchtermanReingold;
    if (text == "fa2" || text == "forceatlas2") return LayoutAlgorithm::ForceAtlas2;
    return std::nullopt;
}

double fr_temperature(const LayoutParams& params, int iteration) {
    const double initial = params.width / 10.0;
    return initial * (1.0 - static_cast<double>(iteration) / static_cast<double>(params.iterations));
}

Positions layout_fr(const ProvGraph& graph, const LayoutParams& params, const LayoutObserver& observer) {
    params.check();
    const IndexedGraph g = index_graph(graph);
    const std::size_t n = g.ids.size();
    if (n == 0) throw Error(Errc::EmptyGraph, "layout needs at least one node");

    std::vector<double> x, y;
    if (n == 1) {
        x = {params.width / 2.0};
        y = {params.height / 2.0};
        return to_positions(g, x, y);
    }
    random_positions(params, n, x, y);

    const auto& kernels = kernels_for(params);
    const double k = params.fr_optimal_distance * std::sqrt(params.width * params.height / static_cast<double>(n));
    const std::vector<double> unit_weight(n, 1.0);
    std::vector<double> disp_x(n), disp_y(n);

    for (int iteration = 0; iteration < params.iterations; ++iteration) {
        kernels.repulsion({x, y, unit_weight, k * k}, disp_x, disp_y);
        for (const auto& [u, v] : g.edges) {
            const double dx = x[u] - x[v];
            const double dy = y[u] - y[v];
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d == 0.0) continue;
            const double f = d / k;
            disp_x[u] -= dx * f;
            disp_y[u] -= dy * f;
            disp_x[v] += dx * f;
            disp_y[v] += dy * f;
        }
        const double temperature = fr_temperature(params, iteration);
        kernels.limited_step({disp_x, disp_y, temperature, params.width, params.height}, x, y);
        if (observer) observer(iteration, x, y, temperature);
    }
    return to_positions(g, x, y);
}

Positions layout_fa2(const ProvGraph& graph, const LayoutParams& params, const LayoutObserver& observer) {
    params.check();
    const IndexedGraph g = index_graph(graph);
    const std::size_t n = g.ids.size();
    if (n == 0) throw Error(Errc::EmptyGraph, "layout needs at least one node");

    std::vector<double> x, y;
    random_positions(params, n, x, y);

    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) mass[i] = g.degree[i] + 1.0;

    const auto& kernels = kernels_for(params);
    const double cx = params.width / 2.0;
    const double cy = params.height / 2.0;
    std::vector<double> fx(n), fy(n), old_fx(n, 0.0), old_fy(n, 0.0), swinging(n);

    // Adaptive global speed (Jacomy et al.; Gephi reference implementation).
    constexpr double kJitterTolerance = 1.0;
    constexpr double kMinSpeedEfficiency = 0.05;
    constexpr double kMaxRise = 0.5;
    double speed = 1.0;
    double speed_efficiency = 1.0;

    for (int iteration = 0; iteration < params.iterations; ++iteration) {
        kernels.repulsion({x, y, mass, params.fa2_scaling}, fx, fy);
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = x[i] - cx;
            const double dy = y[i] - cy;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d == 0.0) continue;
            const double f = params.fa2_gravity * mass[i] / d;
            fx[i] -= dx * f;
            fy[i] -= dy * f;
        }
        for (const auto& [u, v] : g.edges) {
            const double dx = x[u] - x[v];
            const double dy = y[u] - y[v];
            fx[u] -= dx;
            fy[u] -= dy;
            fx[v] += dx;
            fy[v] += dy;
        }

        double total_swinging = 0.0;
        double total_traction = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sx = fx[i] - old_fx[i];
            const double sy = fy[i] - old_fy[i];
            const double tx = fx[i] + old_fx[i];
            const double ty = fy[i] + old_fy[i];
            swinging[i] = mass[i] * std::sqrt(sx * sx + sy * sy);
            total_swinging += swinging[i];
            total_traction += mass[i] * 0.5 * std::sqrt(tx * tx + ty * ty);
        }

        if (total_swinging > 0.0 && total_traction > 0.0) {
            const double estimated = 0.05 * std::sqrt(static_cast<double>(n));
            const double min_jt = std::sqrt(estimated);
            constexpr double kMaxJt = 10.0;
            double jt = kJitterTolerance *
                        std::max(min_jt, std::min(kMaxJt, estimated * total_traction / static_cast<double>(n * n)));
            if (total_swinging / total_traction > 2.0) {
                if (speed_efficiency > kMinSpeedEfficiency) speed_efficiency *= 0.5;
                jt = std::max(jt, kJitterTolerance);
            }
            const double target = jt * speed_efficiency * total_traction / total_swinging;
            if (total_swinging > jt * total_traction) {
                if (speed_efficiency > kMinSpeedEfficiency) speed_efficiency *= 0.7;
            } else if (speed < 1000.0) {
                speed_efficiency *= 1.3;
            }
            speed = speed + std::min(target - speed, kMaxRise * speed);
        }

        for (std::size_t i = 0; i < n; ++i) {
            const double factor = speed / (1.0 + std::sqrt(speed * swinging[i]));
            x[i] += fx[i] * factor;
            y[i] += fy[i] * factor;
        }
        std::swap(fx, old_fx);
        std::swap(fy, old_fy);
        if (observer) observer(iteration, x, y, speed);
    }

    fit_to_frame(params, x, y);
    return to_positions(g, x, y);
}

Positions compute_layout(const ProvGraph& graph, const LayoutParams& params) {
    return params.algorithm == LayoutAlgorithm::ForceAtlas2 ? layout_fa2(graph, params) : layout_fr(graph, params);
}

}  // namespace provenir
