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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sbox.hpp"

namespace sboxtraj {

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Human-readable name of the seed derivation, echoed into experiment metadata.
inline constexpr const char* kSeedMixer =
    "splitmix64 chain: s0 = mix64(master); s_{d+1} = mix64(s_d ^ mix64(index_d + d + 1)); "
    "engine = mt19937_64(s_depth); bounded draws by rejection on 64-bit words";

/**
 * A deterministic random stream identified by a master seed and a
 * derivation path (run, climb, sample, ...).
 *
 * The same (seed, path) always yields the same sequence; the child seed
 * depends only on the path, never on how many values a parent consumed.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed) : master_(master_seed), state_(mix64(master_seed))
    {
        engine_.seed(state_);
    }

    [[nodiscard]] RngStream child(std::uint64_t index) const
    {
        RngStream c = *this;
        c.path_.push_back(index);
        c.state_ = mix64(state_ ^ mix64(index + path_.size() + 1));
        c.engine_.seed(c.state_);
        return c;
    }

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_; }
    [[nodiscard]] const std::vector<std::uint64_t>& path() const noexcept { return path_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound)
    {
        // Reject the top partial bucket so every residue is equally likely.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    /// Fisher-Yates over any random-access range.
    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last)
    {
        const auto count = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t k = count; k > 1; --k) {
            std::uint64_t r = below(k);
            using std::swap;
            swap(first[static_cast<std::ptrdiff_t>(k - 1)], first[static_cast<std::ptrdiff_t>(r)]);
        }
    }

private:
    std::uint64_t master_;
    std::uint64_t state_;
    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
};

inline SBox random_bijective_sbox(int n, RngStream& rng)
{
    if (n < 2 || n > kMaxBits)
        throw SboxError(SboxError::Kind::InvalidWidth, "bijective S-boxes need 2 <= n <= 16");
    std::vector<Word> t(std::size_t{1} << n);
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<Word>(x);
    rng.shuffle(t.begin(), t.end());
    return SBox(n, n, std::move(t));
}

/**
 * Re-permutes the outputs inside each Hamming-weight class. The result has
 * the same output weight at every position, hence the same CCV.
 */
inline SBox hw_class_shuffle(const SBox& f, RngStream& rng)
{
    HwClasses classes = hw_classes(f);
    std::vector<Word> t(f.table().begin(), f.table().end());
    for (std::size_t w = 0; w < classes.values.size(); ++w) {
        auto& vals = classes.values[w];
        rng.shuffle(vals.begin(), vals.end());
        const auto& pos = classes.positions[w];
        for (std::size_t k = 0; k < pos.size(); ++k) t[pos[k]] = vals[k];
    }
    return SBox(f.n(), f.m(), std::move(t));
}

} // namespace sboxtraj
