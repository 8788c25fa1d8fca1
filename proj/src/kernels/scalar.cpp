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

namespace wowuwb::kernels::scalar {

double sum(const double *x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i];
    return acc;
}

double sum_sq(const double *x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i] * x[i];
    return acc;
}

void moments24(const double *x, std::size_t n, double *m2, double *m4)
{
    double a2 = 0.0, a4 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
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
    for (std::size_t i = 0; i < n; ++i)
    {
        double v = p[i] * (scale + rel * z[i]);
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void sub_clamp0(double *out, const double *a, const double *b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
    {
        double v = a[i] - b[i];
        out[i] = v > 0.0 ? v : 0.0;
    }
}

void xcorr(const double *w, std::size_t nw, const double *t, std::size_t nt,
           double *out)
{
    const std::size_t n_lags = nw - nt + 1;
    for (std::size_t lag = 0; lag < n_lags; ++lag)
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < nt; ++j)
            acc += w[lag + j] * t[j];
        out[lag] = acc;
    }
}

std::size_t peak_abs_index(const double *x, std::size_t n)
{
    std::size_t best = 0;
    double best_val = std::fabs(x[0]);
    for (std::size_t i = 1; i < n; ++i)
    {
        double v = std::fabs(x[i]);
        if (v > best_val)
        {
            best_val = v;
            best = i;
        }
    }
    return best;
}

} // namespace wowuwb::kernels::scalar
