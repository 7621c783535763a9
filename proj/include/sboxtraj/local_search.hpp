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
#include <stdexcept>
#include <utility>
#include <vector>

#include "metrics.hpp"
#include "rng.hpp"
#include "sbox.hpp"

namespace sboxtraj {

/// One accepted improving swap.
struct ClimbEvent {
    std::size_t climb_index = 0; // 1-based
    std::size_t i = 0;
    std::size_t j = 0;
    double ccv_after = 0.0;
    CcvKey ccv_key_after;
    SBox sbox_after;
};

struct SearchResult {
    SBox initial;
    SBox final;
    std::vector<ClimbEvent> climbs;
    int n = 0;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> seed_path;
    std::uint64_t ccv_evaluations = 0;
    std::uint64_t scan_passes = 0;
};

struct SearchOptions {
    /// Recompute the profile from scratch after every acceptance and throw on mismatch.
    bool verify_incremental = false;
    /// Keep ClimbEvents in SearchResult::climbs (the observer always sees them).
    bool record_climbs = true;
};

/**
 * LS-HWF: first-improvement hill climbing on CCV over swaps of outputs with
 * differing Hamming weight.
 *
 * Starts from a random permutation drawn from `rng`, scans pairs (i, j),
 * j > i, in lexicographic order and accepts a swap in place whenever its
 * CCV key is strictly larger than the incumbent's; the scan continues with
 * the updated incumbent. Stops after a full pass without acceptance.
 */
template <class Observer>
SearchResult ls_hwf(int n, RngStream rng, Observer&& observer, SearchOptions options = {})
{
    if (n < 2 || n > kMaxBits) throw std::invalid_argument("LS-HWF needs 2 <= n <= 16");

    SearchResult result{.initial = random_bijective_sbox(n, rng),
                        .final = SBox::identity(n),
                        .climbs = {},
                        .n = n,
                        .master_seed = rng.master_seed(),
                        .seed_path = rng.path()};

    std::vector<Word> table(result.initial.table().begin(), result.initial.table().end());
    CcvTracker tracker(result.initial);
    const std::size_t size = table.size();
    std::size_t climbs = 0;

    bool search = true;
    while (search) {
        search = false;
        ++result.scan_passes;
        for (std::size_t i = 0; i + 1 < size; ++i) {
            for (std::size_t j = i + 1; j < size; ++j) {
                const auto hw = tracker.hw();
                if (hw[i] == hw[j]) continue;
                ++result.ccv_evaluations;
                const CcvKey candidate = tracker.candidate_key(i, j);
                if (candidate.key <= tracker.key().key) continue;

                tracker.apply_swap(i, j);
                std::swap(table[i], table[j]);
                search = true;

                ClimbEvent event{.climb_index = ++climbs,
                                 .i = i,
                                 .j = j,
                                 .ccv_after = tracker.key().value(),
                                 .ccv_key_after = tracker.key(),
                                 .sbox_after = SBox(n, n, table)};
                if (options.verify_incremental) {
                    if (kappa_profile(event.sbox_after) != tracker.profile() ||
                        ccv_key(event.sbox_after) != tracker.key())
                        throw std::logic_error("incremental CCV diverged from full recomputation");
                }
                observer(std::as_const(event));
                if (options.record_climbs) result.climbs.push_back(std::move(event));
            }
        }
    }
    result.final = SBox(n, n, std::move(table));
    return result;
}

inline SearchResult ls_hwf(int n, RngStream rng, SearchOptions options = {})
{
    return ls_hwf(n, std::move(rng), [](const ClimbEvent&) {}, options);
}

} // namespace sboxtraj
