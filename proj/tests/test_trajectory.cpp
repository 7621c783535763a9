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

#include <cmath>

#include "sboxtraj/trajectory.hpp"

using namespace sboxtraj;

namespace {

std::vector<TrajectoryPoint> points_of(std::initializer_list<std::pair<double, double>> xy)
{
    std::vector<TrajectoryPoint> pts;
    std::size_t k = 1;
    for (auto [x, y] : xy) pts.push_back({.climb_index = k++, .mean_ccv = x, .mean_metric = y});
    return pts;
}

} // namespace

TEST(SampleEqualCcv, MembersShareTheKey)
{
    RngStream rng(1);
    const SBox fstar = random_bijective_sbox(5, rng);
    const auto sample = sample_equal_ccv(fstar, 30, RngStream(2));
    ASSERT_EQ(sample.size(), 30u);
    for (const auto& f : sample) {
        EXPECT_EQ(ccv_key(f), ccv_key(fstar));
        EXPECT_TRUE(f.bijective());
    }
    EXPECT_EQ(sample, sample_equal_ccv(fstar, 30, RngStream(2)));
}

TEST(SampleEqualCcv, SampleOfOneIsFstar)
{
    RngStream rng(3);
    const SBox fstar = random_bijective_sbox(4, rng);
    const auto sample = sample_equal_ccv(fstar, 1, RngStream(4));
    ASSERT_EQ(sample.size(), 1u);
    EXPECT_EQ(sample.front(), fstar);
    EXPECT_THROW((void)sample_equal_ccv(fstar, 0, RngStream(4)), std::invalid_argument);
}

TEST(SampleEqualCcv, SingleWeightProfile)
{
    // every output has weight 1: all members are rearrangements of the same class
    const SBox f(2, 4, {1, 2, 4, 8});
    for (const auto& g : sample_equal_ccv(f, 10, RngStream(5))) {
        for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(hamming_weight(g[x]), 1);
        EXPECT_EQ(ccv_key(g), ccv_key(f));
    }
}

TEST(TrajectoryPoint, SampleOfOne)
{
    RngStream rng(6);
    const SBox f = random_bijective_sbox(4, rng);
    const auto p = trajectory_point({f}, Metric::TO, 3);
    EXPECT_EQ(p.climb_index, 3u);
    EXPECT_EQ(p.mean_ccv, ccv(f));
    EXPECT_EQ(p.mean_metric, transparency_order(f));
    EXPECT_EQ(p.sample_size, 1u);
}

TEST(TrajectoryPoint, EqualCcvSampleIsExact)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RngStream rng(seed);
        const SBox f = random_bijective_sbox(5, rng);
        const auto sample = sample_equal_ccv(f, 30, rng.child(1));
        for (Metric metric : {Metric::TO, Metric::MTO0, Metric::RTO0})
            EXPECT_EQ(trajectory_point(sample, metric, 1).mean_ccv, ccv(f));
    }
}

TEST(TrajectoryPoint, IdenticalMembers)
{
    RngStream rng(7);
    const SBox f = random_bijective_sbox(4, rng);
    const std::vector<SBox> sample(8, f);
    EXPECT_NEAR(trajectory_point(sample, Metric::TO, 1).mean_metric, transparency_order(f), 1e-15);
    EXPECT_NEAR(trajectory_point(sample, Metric::MTO0, 1).mean_metric, mto_beta_zero(f), 1e-15);
    EXPECT_THROW((void)trajectory_point({}, Metric::TO, 1), std::invalid_argument);
}

TEST(TrajectoryPoint, MixedCcvSampleAverages)
{
    const std::vector<SBox> sample = {SBox::identity(2), SBox::constant(2, 2, 0)};
    EXPECT_NEAR(trajectory_point(sample, Metric::TO, 1).mean_ccv, 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(trajectory_point(sample, Metric::TO, 1).mean_metric, 2.0 / 3.0, 1e-15);
}

TEST(Pearson, Examples)
{
    EXPECT_NEAR(pearson(points_of({{0, 0}, {1, -1}, {2, -2}})), -1.0, 1e-15);
    EXPECT_NEAR(pearson(points_of({{0, 0}, {1, 1}, {2, 2}})), 1.0, 1e-15);
    EXPECT_THROW((void)pearson(points_of({{0, 0}})), DegenerateTrajectory);
    EXPECT_THROW((void)pearson(points_of({{0, 1}, {1, 1}, {2, 1}})), DegenerateTrajectory);
    EXPECT_THROW((void)pearson(points_of({})), DegenerateTrajectory);
}

TEST(Pearson, AffineInvariance)
{
    RngStream rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TrajectoryPoint> pts, scaled, negated;
        const double a = 0.5 + static_cast<double>(rng.below(100)) / 10.0;
        const double b = static_cast<double>(rng.below(1000)) - 500.0;
        for (std::size_t k = 0; k < 10; ++k) {
            const double x = static_cast<double>(rng.below(1000)) / 100.0;
            const double y = static_cast<double>(rng.below(1000)) / 100.0;
            pts.push_back({.climb_index = k, .mean_ccv = x, .mean_metric = y});
            scaled.push_back({.climb_index = k, .mean_ccv = a * x + b, .mean_metric = y / a - b});
            negated.push_back({.climb_index = k, .mean_ccv = x, .mean_metric = -y});
        }
        const double r = pearson(pts);
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        EXPECT_NEAR(pearson(scaled), r, 1e-9);
        EXPECT_NEAR(pearson(negated), -r, 1e-12);
    }
}

TEST(SummaryStats, Examples)
{
    const auto s = summary_stats({-1, -1, -1});
    EXPECT_EQ(s.mean, -1.0);
    EXPECT_EQ(s.standard_deviation, 0.0);
    const auto t = summary_stats({0, 2});
    EXPECT_EQ(t.mean, 1.0);
    EXPECT_NEAR(t.standard_deviation, std::sqrt(2.0), 1e-15);
    EXPECT_THROW((void)summary_stats({0.5}), InsufficientData);
}

TEST(RunExperiment, TrajectoriesFollowTheIncumbent)
{
    const ExperimentConfig config{.n = 4, .runs = 6, .sample_size = 5, .metric = Metric::TO, .master_seed = 17};
    const auto summary = run_experiment(config);
    ASSERT_EQ(summary.trajectories.size(), 6u);
    for (const auto& t : summary.trajectories) {
        const SearchResult search = ls_hwf(config.n, RngStream(config.master_seed).child(t.run_id));
        ASSERT_EQ(t.points.size(), search.climbs.size());
        for (std::size_t k = 0; k < t.points.size(); ++k) {
            EXPECT_EQ(t.points[k].mean_ccv, ccv(search.climbs[k].sbox_after));
            EXPECT_EQ(t.points[k].climb_index, k + 1);
            EXPECT_EQ(t.points[k].sample_size, 5u);
            if (k > 0) {
                EXPECT_GT(t.points[k].mean_ccv, t.points[k - 1].mean_ccv);
            }
        }
    }
}

TEST(RunExperiment, SummaryRecomputesFromPerRunValues)
{
    const auto summary = run_experiment({.n = 5, .runs = 5, .sample_size = 4, .metric = Metric::MTO0, .master_seed = 3});
    std::vector<double> valid;
    std::size_t degenerate = 0;
    for (const auto& v : summary.per_run_pearson) {
        if (v)
            valid.push_back(*v);
        else
            ++degenerate;
    }
    EXPECT_EQ(degenerate, summary.degenerate_runs);
    ASSERT_GE(valid.size(), 2u);
    const auto stats = summary_stats(valid);
    EXPECT_EQ(*summary.mean, stats.mean);
    EXPECT_EQ(*summary.standard_deviation, stats.standard_deviation);
    EXPECT_LT(*summary.mean, 0.0);
}

TEST(RunExperiment, IndependentOfThreadCount)
{
    ExperimentConfig config{.n = 5, .runs = 7, .sample_size = 3, .metric = Metric::RTO0, .master_seed = 99};
    config.threads = 1;
    const auto serial = run_experiment(config);
    config.threads = 3;
    const auto parallel = run_experiment(config);
    ASSERT_EQ(serial.trajectories.size(), parallel.trajectories.size());
    for (std::size_t r = 0; r < serial.trajectories.size(); ++r) {
        const auto& a = serial.trajectories[r].points;
        const auto& b = parallel.trajectories[r].points;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].mean_ccv, b[k].mean_ccv);
            EXPECT_EQ(a[k].mean_metric, b[k].mean_metric);
        }
    }
    EXPECT_EQ(serial.per_run_pearson, parallel.per_run_pearson);
    EXPECT_EQ(serial.mean, parallel.mean);
}

TEST(RunExperiment, RejectsInvalidConfig)
{
    EXPECT_THROW((void)run_experiment({.n = 4, .runs = 1}), std::invalid_argument);
    EXPECT_THROW((void)run_experiment({.n = 1, .runs = 3}), std::invalid_argument);
    EXPECT_THROW((void)run_experiment({.n = 4, .runs = 3, .sample_size = 0}), std::invalid_argument);
}

TEST(Metric, NamesRoundTrip)
{
    for (Metric m : {Metric::TO, Metric::MTO0, Metric::RTO0}) EXPECT_EQ(parse_metric(metric_name(m)), m);
    EXPECT_FALSE(parse_metric("mto").has_value());
}
