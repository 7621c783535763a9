/*
 * SPDX-FileCopyrightText: Copyright 2026 The sboxtraj Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbox.hpp"
#include "walsh.hpp"

namespace sboxtraj {

using WideUint = unsigned __int128;
using WideInt = __int128;

// ---------------------------------------------------------------------------
// Confusion coefficient variance
// ---------------------------------------------------------------------------

/**
 * S(d) = sum_x (HW(F(x)) - HW(F(x ^ d)))^2 for every nonzero key difference d.
 *
 * The confusion coefficient of a key pair (k1, k2) under the HW leakage is
 * S(k1 ^ k2) / 2^n, so the profile carries everything CCV needs as exact
 * integers.
 */
class KappaProfile {
public:
    KappaProfile() = default;
    KappaProfile(int n, int m, std::vector<std::uint64_t> by_difference)
        : n_(n), m_(m), s_(std::move(by_difference))
    {
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    /// Number of nonzero differences, 2^n - 1.
    [[nodiscard]] std::size_t size() const noexcept { return s_.empty() ? 0 : s_.size() - 1; }
    /// S(d) for d in [1, 2^n).
    [[nodiscard]] std::uint64_t operator[](std::size_t d) const noexcept { return s_[d]; }
    [[nodiscard]] std::uint64_t& at_difference(std::size_t d) noexcept { return s_[d]; }

    friend bool operator==(const KappaProfile&, const KappaProfile&) = default;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<std::uint64_t> s_; // index 0 unused, always 0
};

/// Exact integer surrogate of CCV: key = N * sum S^2 - (sum S)^2, N = 2^n - 1.
struct CcvKey {
    int n = 0;
    std::uint64_t count = 0;
    std::uint64_t sum = 0;
    WideUint sum_squares = 0;
    WideUint key = 0;

    /// CCV = key / (N^2 * 2^(2n)).
    [[nodiscard]] double value() const
    {
        if (count == 0) return 0.0;
        long double denom = static_cast<long double>(count) * static_cast<long double>(count);
        denom *= static_cast<long double>(std::uint64_t{1} << n);
        denom *= static_cast<long double>(std::uint64_t{1} << n);
        return static_cast<double>(static_cast<long double>(key) / denom);
    }

    friend bool operator==(const CcvKey&, const CcvKey&) = default;
    friend auto operator<=>(const CcvKey& a, const CcvKey& b) { return a.key <=> b.key; }
};

inline KappaProfile kappa_profile(const SBox& f)
{
    const std::size_t size = f.size();
    const std::vector<int> h = hw_sequence(f);
    std::vector<std::uint64_t> s(size, 0);
    for (std::size_t d = 1; d < size; ++d) {
        std::uint64_t acc = 0;
        for (std::size_t x = 0; x < size; ++x) {
            const int diff = h[x] - h[x ^ d];
            acc += static_cast<std::uint64_t>(diff * diff);
        }
        s[d] = acc;
    }
    return KappaProfile(f.n(), f.m(), std::move(s));
}

inline CcvKey ccv_key(const KappaProfile& profile)
{
    CcvKey k;
    k.n = profile.n();
    k.count = profile.size();
    for (std::size_t d = 1; d <= profile.size(); ++d) {
        const std::uint64_t v = profile[d];
        k.sum += v;
        k.sum_squares += static_cast<WideUint>(v) * v;
    }
    k.key = static_cast<WideUint>(k.count) * k.sum_squares - static_cast<WideUint>(k.sum) * k.sum;
    return k;
}

inline CcvKey ccv_key(const SBox& f) { return ccv_key(kappa_profile(f)); }

/// Population variance of the confusion coefficients over all nonzero key differences.
inline double ccv(const SBox& f) { return ccv_key(f).value(); }

/**
 * Keeps the kappa profile and CCV key of an incumbent S-box and evaluates
 * single output swaps in O(2^n).
 *
 * Swapping outputs at i and j only touches the summands at
 * x in {i, j, i^d, j^d}. Working those out gives, for d != i^j,
 *     S'(d) = S(d) + 4 (h_j - h_i) (h(j^d) - h(i^d)),
 * while S(i^j) is unchanged. The plain sum of S is swap-invariant.
 */
class CcvTracker {
public:
    explicit CcvTracker(const SBox& f)
        : CcvTracker(hw_sequence(f), kappa_profile(f))
    {
    }

    CcvTracker(std::vector<int> hw, KappaProfile profile)
        : hw_(std::move(hw)), profile_(std::move(profile)), key_(sboxtraj::ccv_key(profile_))
    {
    }

    [[nodiscard]] const CcvKey& key() const noexcept { return key_; }
    [[nodiscard]] const KappaProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] std::span<const int> hw() const noexcept { return hw_; }

    /// Key of the incumbent with outputs i and j exchanged. Does not modify state.
    [[nodiscard]] CcvKey candidate_key(std::size_t i, std::size_t j) const
    {
        CcvKey k = key_;
        const std::int64_t dh = hw_[j] - hw_[i];
        if (dh == 0) return k;
        const std::size_t fixed = i ^ j;
        WideInt delta_sq = 0;
        for (std::size_t d = 1; d < hw_.size(); ++d) {
            if (d == fixed) continue;
            const std::int64_t delta = 4 * dh * (hw_[j ^ d] - hw_[i ^ d]);
            const auto s = static_cast<std::int64_t>(profile_[d]);
            delta_sq += 2 * s * delta + delta * delta;
        }
        k.sum_squares = static_cast<WideUint>(static_cast<WideInt>(k.sum_squares) + delta_sq);
        k.key = static_cast<WideUint>(k.count) * k.sum_squares - static_cast<WideUint>(k.sum) * k.sum;
        return k;
    }

    void apply_swap(std::size_t i, std::size_t j)
    {
        const std::int64_t dh = hw_[j] - hw_[i];
        if (dh != 0) {
            const std::size_t fixed = i ^ j;
            for (std::size_t d = 1; d < hw_.size(); ++d) {
                if (d == fixed) continue;
                const std::int64_t delta = 4 * dh * (hw_[j ^ d] - hw_[i ^ d]);
                auto& s = profile_.at_difference(d);
                s = static_cast<std::uint64_t>(static_cast<std::int64_t>(s) + delta);
            }
            std::swap(hw_[i], hw_[j]);
        }
        key_ = sboxtraj::ccv_key(profile_);
    }

private:
    std::vector<int> hw_;
    KappaProfile profile_;
    CcvKey key_;
};

/// Key and profile of swap_outputs(f, i, j), derived from those of f.
inline std::pair<CcvKey, KappaProfile> ccv_incremental(const SBox& f, const CcvKey& key,
                                                       const KappaProfile& profile, std::size_t i,
                                                       std::size_t j)
{
    if (i >= f.size() || j >= f.size() || i == j)
        throw SboxError(SboxError::Kind::IndexOutOfRange,
                        "swap positions must be distinct and below " + std::to_string(f.size()));
    CcvTracker tracker(hw_sequence(f), profile);
    if (tracker.key() != key) throw std::invalid_argument("CCV key does not belong to the given profile");
    tracker.apply_swap(i, j);
    return {tracker.key(), tracker.profile()};
}

// ---------------------------------------------------------------------------
// Transparency order family
// ---------------------------------------------------------------------------

/**
 * C[i][j](a) = sum_x (-1)^(F_i(x) ^ F_j(x ^ a)), component indices are bit
 * positions 0..m-1.
 */
class CrossCorrelationTable {
public:
    CrossCorrelationTable(int n, int m)
        : n_(n), m_(m), data_(static_cast<std::size_t>(m) * m << n, 0)
    {
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] std::size_t shifts() const noexcept { return std::size_t{1} << n_; }

    [[nodiscard]] std::int32_t operator()(int i, int j, std::size_t alpha) const noexcept
    {
        return data_[offset(i, j) + alpha];
    }
    std::int32_t& operator()(int i, int j, std::size_t alpha) noexcept { return data_[offset(i, j) + alpha]; }

    [[nodiscard]] std::span<const std::int32_t> row(int i, int j) const noexcept
    {
        return {data_.data() + offset(i, j), shifts()};
    }

    friend bool operator==(const CrossCorrelationTable&, const CrossCorrelationTable&) = default;

private:
    [[nodiscard]] std::size_t offset(int i, int j) const noexcept
    {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j)) << n_;
    }

    int n_;
    int m_;
    std::vector<std::int32_t> data_;
};

inline CrossCorrelationTable cross_correlation_naive(const SBox& f)
{
    CrossCorrelationTable c(f.n(), f.m());
    const std::size_t size = f.size();
    for (int i = 0; i < f.m(); ++i) {
        for (int j = 0; j < f.m(); ++j) {
            for (std::size_t a = 0; a < size; ++a) {
                std::int32_t acc = 0;
                for (std::size_t x = 0; x < size; ++x)
                    acc += (f.component(i, x) ^ f.component(j, x ^ a)) ? -1 : 1;
                c(i, j, a) = acc;
            }
        }
    }
    return c;
}

/// Same table via the correlation theorem: C_ij = 2^-n * WHT(W_i * W_j).
inline CrossCorrelationTable cross_correlation_fast(const SBox& f)
{
    const std::size_t size = f.size();
    const int m = f.m();
    std::vector<std::vector<std::int64_t>> spectra(static_cast<std::size_t>(m), std::vector<std::int64_t>(size));
    for (int i = 0; i < m; ++i) {
        auto& w = spectra[static_cast<std::size_t>(i)];
        for (std::size_t x = 0; x < size; ++x) w[x] = f.component(i, x) ? -1 : 1;
        fwht(std::span<std::int64_t>(w));
    }

    CrossCorrelationTable c(f.n(), m);
    std::vector<std::int64_t> prod(size);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const auto& wi = spectra[static_cast<std::size_t>(i)];
            const auto& wj = spectra[static_cast<std::size_t>(j)];
            for (std::size_t u = 0; u < size; ++u) prod[u] = wi[u] * wj[u];
            fwht(std::span<std::int64_t>(prod));
            for (std::size_t a = 0; a < size; ++a) c(i, j, a) = static_cast<std::int32_t>(prod[a] >> f.n());
        }
    }
    return c;
}

/// Fast path from n = 6 upward, direct summation below.
inline CrossCorrelationTable cross_correlation(const SBox& f)
{
    return f.n() >= 6 ? cross_correlation_fast(f) : cross_correlation_naive(f);
}

namespace detail {

/// 2^(2n) - 2^n, the normalizer shared by TO, MTO and RTO.
[[nodiscard]] inline double to_normalizer(int n)
{
    const double size = static_cast<double>(std::uint64_t{1} << n);
    return size * size - size;
}

[[nodiscard]] inline int beta_sign(std::uint32_t beta, int i, int j) noexcept
{
    return (((beta >> i) ^ (beta >> j)) & 1u) ? -1 : 1;
}

// sum over a != 0 of sum_j |sum_i s_ij C_ij(a)|
inline std::int64_t mto_mass(const CrossCorrelationTable& c, std::uint32_t beta)
{
    std::int64_t total = 0;
    const int m = c.m();
    for (std::size_t a = 1; a < c.shifts(); ++a) {
        for (int j = 0; j < m; ++j) {
            std::int64_t inner = 0;
            for (int i = 0; i < m; ++i) inner += beta_sign(beta, i, j) * c(i, j, a);
            total += inner < 0 ? -inner : inner;
        }
    }
    return total;
}

// sum over a != 0 of |sum_j sum_i s_ij C_ij(a)|
inline std::int64_t rto_mass(const CrossCorrelationTable& c, std::uint32_t beta)
{
    std::int64_t total = 0;
    const int m = c.m();
    for (std::size_t a = 1; a < c.shifts(); ++a) {
        std::int64_t inner = 0;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) inner += beta_sign(beta, i, j) * c(i, j, a);
        total += inner < 0 ? -inner : inner;
    }
    return total;
}

template <class Mass>
double max_over_beta(const CrossCorrelationTable& c, Mass mass)
{
    // beta and its complement give the same signs; the top bit can be fixed to 0.
    const std::uint32_t reps = std::uint32_t{1} << (c.m() - 1);
    std::int64_t best = mass(c, 0u);
    for (std::uint32_t beta = 1; beta < reps; ++beta) {
        const std::int64_t v = mass(c, beta);
        if (v < best) best = v;
    }
    return c.m() - static_cast<double>(best) / to_normalizer(c.n());
}

} // namespace detail

/**
 * Transparency order under the HW model:
 *   m - 1/(2^2n - 2^n) * sum_{a != 0} | m 2^n - 2 sum_x HW(F(x) ^ F(x ^ a)) |
 */
inline double transparency_order(const SBox& f)
{
    const std::size_t size = f.size();
    const auto table = f.table();
    const std::int64_t base = static_cast<std::int64_t>(f.m()) * static_cast<std::int64_t>(size);
    std::int64_t total = 0;
    for (std::size_t a = 1; a < size; ++a) {
        std::int64_t hw_sum = 0;
        for (std::size_t x = 0; x < size; ++x) hw_sum += hamming_weight(table[x] ^ table[x ^ a]);
        const std::int64_t term = base - 2 * hw_sum;
        total += term < 0 ? -term : term;
    }
    return f.m() - static_cast<double>(total) / detail::to_normalizer(f.n());
}

inline double mto_beta(const CrossCorrelationTable& c, std::uint32_t beta)
{
    return c.m() - static_cast<double>(detail::mto_mass(c, beta)) / detail::to_normalizer(c.n());
}

inline double rto_beta(const CrossCorrelationTable& c, std::uint32_t beta)
{
    return c.m() - static_cast<double>(detail::rto_mass(c, beta)) / detail::to_normalizer(c.n());
}

inline double mto(const CrossCorrelationTable& c) { return detail::max_over_beta(c, detail::mto_mass); }
inline double rto(const CrossCorrelationTable& c) { return detail::max_over_beta(c, detail::rto_mass); }

inline void check_beta(const SBox& f, std::uint32_t beta)
{
    if (beta >= (std::uint32_t{1} << f.m()))
        throw SboxError(SboxError::Kind::ValueOutOfRange, "beta must fit in m bits");
}

inline double mto_beta(const SBox& f, std::uint32_t beta)
{
    check_beta(f, beta);
    return mto_beta(cross_correlation(f), beta);
}

inline double rto_beta(const SBox& f, std::uint32_t beta)
{
    check_beta(f, beta);
    return rto_beta(cross_correlation(f), beta);
}

inline double mto(const SBox& f) { return mto(cross_correlation(f)); }
inline double rto(const SBox& f) { return rto(cross_correlation(f)); }
inline double mto_beta_zero(const SBox& f) { return mto_beta(cross_correlation(f), 0u); }
inline double rto_beta_zero(const SBox& f) { return rto_beta(cross_correlation(f), 0u); }

} // namespace sboxtraj
