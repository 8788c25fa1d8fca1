// SPDX-License-Identifier: Apache-2.0
//
// wow-uwb -- stochastic UWB channel simulator for hurricane conditions
// Copyright (C) 2026 the wow-uwb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wowuwb/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace wowuwb::kernels::avx2 {

static inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, h));
}

double sum(const double *x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double total = hsum(acc);
    for (; i < n; ++i)
        total += x[i];
    return total;
}

double sum_sq(const double *x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i)
        total += x[i] * x[i];
    return total;
}

void moments24(const double *x, std::size_t n, double *m2, double *m4)
{
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc4 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d s = _mm256_mul_pd(v, v);
        acc2 = _mm256_add_pd(acc2, s);
        acc4 = _mm256_fmadd_pd(s, s, acc4);
    }
    double a2 = hsum(acc2), a4 = hsum(acc4);
    for (; i < n; ++i)
    {
        double s = x[i] * x[i];
        a2 += s;
        a4 += s * s;
    }
    *m2 = a2;
    *m4 = a4;
}

void scale_jitter_clamp0(double *out, const double *p, const double *z,
                         std::size_t n, double scale, double rel)
{
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vrel = _mm256_set1_pd(rel);
    const __m256d vzero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d vp = _mm256_loadu_pd(p + i);
        __m256d vz = _mm256_loadu_pd(z + i);
        __m256d f = _mm256_fmadd_pd(vrel, vz, vscale);
        __m256d v = _mm256_mul_pd(vp, f);
        _mm256_storeu_pd(out + i, _mm256_max_pd(v, vzero));
    }
    for (; i < n; ++i)
    {
        double v = p[i] * (scale + rel * z[i]);
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void sub_clamp0(double *out, const double *a, const double *b, std::size_t n)
{
    const __m256d vzero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_max_pd(v, vzero));
    }
    for (; i < n; ++i)
    {
        double v = a[i] - b[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
}

// Vectorized over lags: 4 adjacent lags share each template sample.
void xcorr(const double *w, std::size_t nw, const double *t, std::size_t nt,
           double *out)
{
    const std::size_t n_lags = nw - nt + 1;
    std::size_t lag = 0;
    for (; lag + 4 <= n_lags; lag += 4)
    {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t j = 0; j < nt; ++j)
        {
            __m256d vw = _mm256_loadu_pd(w + lag + j);
            acc = _mm256_fmadd_pd(vw, _mm256_set1_pd(t[j]), acc);
        }
        _mm256_storeu_pd(out + lag, acc);
    }
    for (; lag < n_lags; ++lag)
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < nt; ++j)
            acc += w[lag + j] * t[j];
        out[lag] = acc;
    }
}

// Two passes: exact max of |x| (max is rounding-free), then first index match.
std::size_t peak_abs_index(const double *x, std::size_t n)
{
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
    {
        __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i));
        vmax = _mm256_max_pd(vmax, v);
    }
    double m = 0.0;
    {
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, vmax);
        for (double v : tmp)
            if (v > m)
                m = v;
    }
    for (; i < n; ++i)
    {
        double v = std::fabs(x[i]);
        if (v > m)
            m = v;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (std::fabs(x[k]) == m)
            return k;
    return 0;
}

} // namespace wowuwb::kernels::avx2
