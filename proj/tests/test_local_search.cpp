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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sboxtraj/local_search.hpp"

using namespace sboxtraj;

namespace {

void expect_same(const SearchResult& a, const SearchResult& b)
{
    EXPECT_EQ(a.initial, b.initial);
    EXPECT_EQ(a.final, b.final);
    ASSERT_EQ(a.climbs.size(), b.climbs.size());
    for (std::size_t k = 0; k < a.climbs.size(); ++k) {
        EXPECT_EQ(a.climbs[k].i, b.climbs[k].i);
        EXPECT_EQ(a.climbs[k].j, b.climbs[k].j);
        EXPECT_EQ(a.climbs[k].ccv_key_after, b.climbs[k].ccv_key_after);
    }
    EXPECT_EQ(a.ccv_evaluations, b.ccv_evaluations);
    EXPECT_EQ(a.scan_passes, b.scan_passes);
}

} // namespace

TEST(LsHwf, Deterministic)
{
    for (int n : {4, 5, 6}) {
        const RngStream rng = RngStream(7).child(0);
        expect_same(ls_hwf(n, rng), ls_hwf(n, rng));
    }
}

TEST(LsHwf, RecordsMetadata)
{
    const SearchResult r = ls_hwf(5, RngStream(3).child(4));
    EXPECT_EQ(r.n, 5);
    EXPECT_EQ(r.master_seed, 3u);
    EXPECT_EQ(r.seed_path, (std::vector<std::uint64_t>{4}));
    EXPECT_GE(r.scan_passes, 1u);
    EXPECT_GE(r.ccv_evaluations, r.climbs.size());
}

TEST(LsHwf, NeverDecreasesCcv)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SearchResult r = ls_hwf(4, RngStream(seed));
        if (r.climbs.empty())
            EXPECT_EQ(ccv(r.final), ccv(r.initial));
        else
            EXPECT_GT(ccv(r.final), ccv(r.initial));
    }
}

TEST(LsHwf, ReachesVerifiedLocalOptima)
{
    const RngStream root(2023);
    for (std::uint64_t run = 0; run < 30; ++run) {
        SearchOptions options;
        options.verify_incremental = true;
        const SearchResult r = ls_hwf(4, root.child(run), options);
        EXPECT_TRUE(oracle::is_local_optimum(r.final)) << "run " << run;
        EXPECT_TRUE(r.final.bijective());

        // replay: every swap exchanged outputs of different weight and raised the key
        std::vector<Word> t(r.initial.table().begin(), r.initial.table().end());
        unsigned __int128 previous = oracle::ccv_key_full(r.initial);
        for (std::size_t k = 0; k < r.climbs.size(); ++k) {
            const auto& e = r.climbs[k];
            EXPECT_EQ(e.climb_index, k + 1);
            EXPECT_LT(e.i, e.j);
            EXPECT_NE(hamming_weight(t[e.i]), hamming_weight(t[e.j]));
            std::swap(t[e.i], t[e.j]);
            EXPECT_EQ(SBox(4, 4, t), e.sbox_after);
            const auto key = oracle::ccv_key_full(e.sbox_after);
            EXPECT_TRUE(key == e.ccv_key_after.key);
            EXPECT_TRUE(key > previous);
            previous = key;
            EXPECT_TRUE(e.sbox_after.bijective());
        }
        EXPECT_EQ(SBox(4, 4, t), r.final);
    }
}

TEST(LsHwf, ObserverSeesEveryClimb)
{
    std::vector<std::size_t> seen;
    const SearchResult r = ls_hwf(5, RngStream(9), [&](const ClimbEvent& e) { seen.push_back(e.climb_index); });
    ASSERT_EQ(seen.size(), r.climbs.size());
    for (std::size_t k = 0; k < seen.size(); ++k) EXPECT_EQ(seen[k], k + 1);

    SearchOptions quiet;
    quiet.record_climbs = false;
    std::size_t count = 0;
    const SearchResult q = ls_hwf(5, RngStream(9), [&](const ClimbEvent&) { ++count; }, quiet);
    EXPECT_TRUE(q.climbs.empty());
    EXPECT_EQ(count, r.climbs.size());
    EXPECT_EQ(q.final, r.final);
}

TEST(LsHwf, RejectsUnsupportedWidth)
{
    EXPECT_THROW((void)ls_hwf(1, RngStream(1)), std::invalid_argument);
    EXPECT_THROW((void)ls_hwf(17, RngStream(1)), std::invalid_argument);
}

TEST(LsHwf, EightBitRunIsLocallyOptimalForSampledSwaps)
{
    const SearchResult r = ls_hwf(8, RngStream(5).child(0));
    ASSERT_FALSE(r.climbs.empty());
    const CcvTracker tracker(r.final);
    for (std::size_t i = 0; i < 256; i += 7)
        for (std::size_t j = i + 1; j < 256; j += 5)
            if (hamming_weight(r.final[i]) != hamming_weight(r.final[j])) {
                EXPECT_FALSE(tracker.candidate_key(i, j) > tracker.key());
            }
}
