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

#ifndef WOWUWB_KERNELS_HPP
#define WOWUWB_KERNELS_HPP

#include <cstddef>
#include <string>

// Dense inner loops over delay-grid vectors (PDPs, scan waveforms, sample
// pools). Each operation has a scalar reference implementation and, on x86-64,
// an AVX2 variant; the backend is chosen once at startup from CPUID and can be
// forced with set_backend() or the WOWUWB_KERNELS environment variable
// ("scalar", "avx2", "auto"). All variants are equivalence-tested against the
// scalar reference.

namespace wowuwb::kernels {

enum class Backend { scalar, avx2 };

Backend backend();
void set_backend(Backend b);
bool avx2_supported();
std::string backend_name();

// Sum of x[0..n).
double sum(const double *x, std::size_t n);

// Sum of squares of x[0..n).
double sum_sq(const double *x, std::size_t n);

// Second and fourth raw moments accumulated in one pass:
// m2 = sum x^2, m4 = sum x^4.
void moments24(const double *x, std::size_t n, double *m2, double *m4);

// out[i] = max(0, p[i] * (scale + rel * z[i])). Used by the wind-driven-rain
// law: per-bin attenuation plus relative Gaussian perturbation, clamped at 0.
void scale_jitter_clamp0(double *out, const double *p, const double *z,
                         std::size_t n, double scale, double rel);

// out[i] = max(0, a[i] - b[i]). Static-background subtraction.
void sub_clamp0(double *out, const double *a, const double *b, std::size_t n);

// Sliding dot product: out[lag] = sum_j w[lag + j] * t[j] for
// lag in [0, nw - nt]. Requires nw >= nt >= 1. Used by CLEAN lag search.
void xcorr(const double *w, std::size_t nw, const double *t, std::size_t nt,
           double *out);

// Index of the maximum |x[i]|; first occurrence wins. n >= 1.
std::size_t peak_abs_index(const double *x, std::size_t n);

// Scalar reference implementations, used directly by the equivalence tests.
namespace scalar {
double sum(const double *x, std::size_t n);
double sum_sq(const double *x, std::size_t n);
void moments24(const double *x, std::size_t n, double *m2, double *m4);
void scale_jitter_clamp0(double *out, const double *p, const double *z,
                         std::size_t n, double scale, double rel);
void sub_clamp0(double *out, const double *a, const double *b, std::size_t n);
void xcorr(const double *w, std::size_t nw, const double *t, std::size_t nt,
           double *out);
std::size_t peak_abs_index(const double *x, std::size_t n);
} // namespace scalar

} // namespace wowuwb::kernels

#endif
