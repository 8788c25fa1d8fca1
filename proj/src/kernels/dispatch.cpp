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

#include <cstdlib>
#include <stdexcept>

namespace wowuwb::kernels {

#if defined(WOWUWB_BUILD_AVX2)
namespace avx2 {
double sum(const double *, std::size_t);
double sum_sq(const double *, std::size_t);
void moments24(const double *, std::size_t, double *, double *);
void scale_jitter_clamp0(double *, const double *, const double *, std::size_t,
                         double, double);
void sub_clamp0(double *, const double *, const double *, std::size_t);
void xcorr(const double *, std::size_t, const double *, std::size_t, double *);
std::size_t peak_abs_index(const double *, std::size_t);
} // namespace avx2
#endif

bool avx2_supported()
{
#if defined(WOWUWB_BUILD_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend pick_default()
{
    if (const char *env = std::getenv("WOWUWB_KERNELS"))
    {
        std::string s(env);
        if (s == "scalar")
            return Backend::scalar;
        if (s == "avx2")
        {
            if (!avx2_supported())
                throw std::runtime_error("WOWUWB_KERNELS=avx2 but AVX2 is unavailable");
            return Backend::avx2;
        }
        // anything else (including "auto") falls through to detection
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend &current()
{
    static Backend b = pick_default();
    return b;
}

} // namespace

Backend backend() { return current(); }

void set_backend(Backend b)
{
    if (b == Backend::avx2 && !avx2_supported())
        throw std::runtime_error("AVX2 backend requested but not available");
    current() = b;
}

std::string backend_name()
{
    return current() == Backend::avx2 ? "avx2" : "scalar";
}

double sum(const double *x, std::size_t n)
{
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::sum(x, n);
#endif
    return scalar::sum(x, n);
}

double sum_sq(const double *x, std::size_t n)
{
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::sum_sq(x, n);
#endif
    return scalar::sum_sq(x, n);
}

void moments24(const double *x, std::size_t n, double *m2, double *m4)
{
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::moments24(x, n, m2, m4);
#endif
    return scalar::moments24(x, n, m2, m4);
}

void scale_jitter_clamp0(double *out, const double *p, const double *z,
                         std::size_t n, double scale, double rel)
{
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::scale_jitter_clamp0(out, p, z, n, scale, rel);
#endif
    return scalar::scale_jitter_clamp0(out, p, z, n, scale, rel);
}

void sub_clamp0(double *out, const double *a, const double *b, std::size_t n)
{
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::sub_clamp0(out, a, b, n);
#endif
    return scalar::sub_clamp0(out, a, b, n);
}

void xcorr(const double *w, std::size_t nw, const double *t, std::size_t nt,
           double *out)
{
    if (nt == 0 || nw < nt)
        throw std::invalid_argument("xcorr: template empty or longer than waveform");
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::xcorr(w, nw, t, nt, out);
#endif
    return scalar::xcorr(w, nw, t, nt, out);
}

std::size_t peak_abs_index(const double *x, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("peak_abs_index: empty input");
#if defined(WOWUWB_BUILD_AVX2)
    if (current() == Backend::avx2)
        return avx2::peak_abs_index(x, n);
#endif
    return scalar::peak_abs_index(x, n);
}

} // namespace wowuwb::kernels
