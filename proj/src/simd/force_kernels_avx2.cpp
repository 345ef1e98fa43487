// Compiled with -mavx2 only (no FMA) so every lane rounds like the scalar path.

#include <immintrin.h>

#include "force_kernels_row.hpp"

namespace provenir::simd {

void repulsion_avx2(const RepulsionInput& in, std::span<double> out_x, std::span<double> out_y) {
    const std::size_t n = in.x.size();
    const double min_d2 = in.min_distance * in.min_distance;
    const __m256d v_min_d2 = _mm256_set1_pd(min_d2);
    const __m256d v_pos_min = _mm256_set1_pd(in.min_distance);
    const __m256d v_neg_min = _mm256_set1_pd(-in.min_distance);
    const __m256d v_zero = _mm256_setzero_pd();
    const __m256d v_coefficient = _mm256_set1_pd(in.coefficient);
    const __m256d lane_offsets = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(in.x.data() + i);
        const __m256d yi = _mm256_loadu_pd(in.y.data() + i);
        const __m256d scaled_wi = _mm256_mul_pd(v_coefficient, _mm256_loadu_pd(in.weight.data() + i));
        const __m256d index_i = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), lane_offsets);
        __m256d acc_x = v_zero;
        __m256d acc_y = v_zero;
        for (std::size_t j = 0; j < n; ++j) {
            const __m256d index_j = _mm256_set1_pd(static_cast<double>(j));
            __m256d ddx = _mm256_sub_pd(xi, _mm256_set1_pd(in.x[j]));
            __m256d ddy = _mm256_sub_pd(yi, _mm256_set1_pd(in.y[j]));
            __m256d d2 = _mm256_add_pd(_mm256_mul_pd(ddx, ddx), _mm256_mul_pd(ddy, ddy));

            const __m256d close = _mm256_cmp_pd(d2, v_min_d2, _CMP_LT_OQ);
            const __m256d i_before_j = _mm256_cmp_pd(index_i, index_j, _CMP_LT_OQ);
            const __m256d substitute_dx = _mm256_blendv_pd(v_pos_min, v_neg_min, i_before_j);
            ddx = _mm256_blendv_pd(ddx, substitute_dx, close);
            ddy = _mm256_blendv_pd(ddy, v_zero, close);
            d2 = _mm256_blendv_pd(d2, v_min_d2, close);

            const __m256d f = _mm256_div_pd(_mm256_mul_pd(scaled_wi, _mm256_set1_pd(in.weight[j])), d2);
            const __m256d next_x = _mm256_add_pd(acc_x, _mm256_mul_pd(ddx, f));
            const __m256d next_y = _mm256_add_pd(acc_y, _mm256_mul_pd(ddy, f));
            const __m256d self = _mm256_cmp_pd(index_i, index_j, _CMP_EQ_OQ);
            acc_x = _mm256_blendv_pd(next_x, acc_x, self);
            acc_y = _mm256_blendv_pd(next_y, acc_y, self);
        }
        _mm256_storeu_pd(out_x.data() + i, acc_x);
        _mm256_storeu_pd(out_y.data() + i, acc_y);
    }
    for (; i < n; ++i) detail::repulsion_row(in, i, out_x[i], out_y[i]);
}

void limited_step_avx2(const StepInput& in, std::span<double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d v_max_step = _mm256_set1_pd(in.max_step);
    const __m256d v_one = _mm256_set1_pd(1.0);
    const __m256d v_zero = _mm256_setzero_pd();
    const __m256d v_width = _mm256_set1_pd(in.width);
    const __m256d v_height = _mm256_set1_pd(in.height);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_loadu_pd(in.dx.data() + i);
        const __m256d dy = _mm256_loadu_pd(in.dy.data() + i);
        const __m256d length = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        const __m256d too_long = _mm256_cmp_pd(length, v_max_step, _CMP_GT_OQ);
        // Lanes that are not too long may divide by zero; their quotient is discarded.
        const __m256d scale = _mm256_blendv_pd(v_one, _mm256_div_pd(v_max_step, length), too_long);
        __m256d px = _mm256_add_pd(_mm256_loadu_pd(x.data() + i), _mm256_mul_pd(dx, scale));
        __m256d py = _mm256_add_pd(_mm256_loadu_pd(y.data() + i), _mm256_mul_pd(dy, scale));
        px = _mm256_min_pd(v_width, _mm256_max_pd(v_zero, px));
        py = _mm256_min_pd(v_height, _mm256_max_pd(v_zero, py));
        _mm256_storeu_pd(x.data() + i, px);
        _mm256_storeu_pd(y.data() + i, py);
    }
    for (; i < n; ++i) detail::step_row(in, i, x[i], y[i]);
}

}  // namespace provenir::simd
