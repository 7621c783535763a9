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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "local_search.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "sbox.hpp"

namespace sboxtraj {

enum class Metric { TO, MTO0, RTO0 };

[[nodiscard]] constexpr std::string_view metric_name(Metric metric) noexcept
{
    switch (metric) {
    case Metric::TO: return "to";
    case Metric::MTO0: return "mto0";
    case Metric::RTO0: return "rto0";
    }
    return "?";
}

[[nodiscard]] inline std::optional<Metric> parse_metric(std::string_view name) noexcept
{
    if (name == "to") return Metric::TO;
    if (name == "mto0") return Metric::MTO0;
    if (name == "rto0") return Metric::RTO0;
    return std::nullopt;
}

inline double evaluate_metric(const SBox& f, Metric metric)
{
    switch (metric) {
    case Metric::TO: return transparency_order(f);
    case Metric::MTO0: return mto_beta_zero(f);
    case Metric::RTO0: return rto_beta_zero(f);
    }
    throw std::invalid_argument("unknown metric");
}

class DegenerateTrajectory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrajectoryPoint {
    std::size_t climb_index = 0;
    double mean_ccv = 0.0;
    double mean_metric = 0.0;
    Metric metric = Metric::TO;
    std::size_t sample_size = 0;
};

struct Trajectory {
    std::size_t run_id = 0;
    Metric metric = Metric::TO;
    std::vector<TrajectoryPoint> points;
    std::optional<double> pearson_r; // empty when degenerate
};

struct ExperimentConfig {
    int n = 4;
    std::size_t runs = 30;
    std::size_t sample_size = 30;
    Metric metric = Metric::TO;
    std::uint64_t master_seed = 1;
    unsigned threads = 0; // 0: hardware concurrency
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<Trajectory> trajectories;
    std::vector<std::optional<double>> per_run_pearson;
    std::size_t degenerate_runs = 0;
    std::optional<double> mean;
    std::optional<double> standard_deviation;
};

/**
 * `size` independent HW-class shuffles of `fstar`, all with the CCV of
 * `fstar`. A sample of one is `fstar` itself.
 */
inline std::vector<SBox> sample_equal_ccv(const SBox& fstar, std::size_t size, const RngStream& rng)
{
    if (size == 0) throw std::invalid_argument("sample size must be at least 1");
    if (size == 1) return {fstar};
    std::vector<SBox> sample;
    sample.reserve(size);
    for (std::size_t s = 0; s < size; ++s) {
        RngStream draw = rng.child(s);
        sample.push_back(hw_class_shuffle(fstar, draw));
    }
    return sample;
}

/// Arithmetic means of CCV and of the selected metric over a sample.
inline TrajectoryPoint trajectory_point(const std::vector<SBox>& sample, Metric metric, std::size_t k)
{
    if (sample.empty()) throw std::invalid_argument("trajectory point needs a nonempty sample");

    // CCV is averaged on the exact keys so a CCV-constant sample reproduces ccv(F*) bit for bit.
    CcvKey first = ccv_key(sample.front());
    WideUint key_total = 0;
    double metric_total = 0.0;
    for (const SBox& f : sample) {
        key_total += ccv_key(f).key;
        metric_total += evaluate_metric(f, metric);
    }
    const auto count = static_cast<WideUint>(sample.size());
    double mean_ccv;
    if (key_total % count == 0) {
        first.key = key_total / count;
        mean_ccv = first.value();
    } else {
        CcvKey scale = first;
        scale.key = 1;
        mean_ccv = static_cast<double>(static_cast<long double>(key_total) / static_cast<long double>(sample.size()) *
                                       static_cast<long double>(scale.value()));
    }
    return TrajectoryPoint{.climb_index = k,
                           .mean_ccv = mean_ccv,
                           .mean_metric = metric_total / static_cast<double>(sample.size()),
                           .metric = metric,
                           .sample_size = sample.size()};
}

/// Pearson product-moment coefficient of (mean_ccv, mean_metric).
inline double pearson(const std::vector<TrajectoryPoint>& points)
{
    const std::size_t q = points.size();
    if (q < 2) throw DegenerateTrajectory("a trajectory needs at least two points");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.mean_ccv;
        my += p.mean_metric;
    }
    mx /= static_cast<double>(q);
    my /= static_cast<double>(q);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double dx = p.mean_ccv - mx;
        const double dy = p.mean_metric - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateTrajectory("a trajectory coordinate is constant");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct SummaryStats {
    double mean = 0.0;
    double standard_deviation = 0.0;
};

/// Mean and sample standard deviation (divisor count - 1).
inline SummaryStats summary_stats(const std::vector<double>& values)
{
    if (values.size() < 2) throw InsufficientData("summary statistics need at least two values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

/// One LS-HWF run with a trajectory point formed at every climb.
inline Trajectory run_trajectory(const ExperimentConfig& config, std::size_t run_id)
{
    const RngStream run_stream = RngStream(config.master_seed).child(run_id);
    Trajectory t{.run_id = run_id, .metric = config.metric, .points = {}, .pearson_r = std::nullopt};
    SearchOptions options;
    options.record_climbs = false;
    ls_hwf(
        config.n, run_stream,
        [&](const ClimbEvent& event) {
            const auto sample =
                sample_equal_ccv(event.sbox_after, config.sample_size, run_stream.child(event.climb_index));
            t.points.push_back(trajectory_point(sample, config.metric, event.climb_index));
        },
        options);
    try {
        t.pearson_r = pearson(t.points);
    } catch (const DegenerateTrajectory&) {
        t.pearson_r = std::nullopt;
    }
    return t;
}

inline void validate(const ExperimentConfig& config)
{
    if (config.n < 2 || config.n > kMaxBits) throw std::invalid_argument("n must lie in [2, 16]");
    if (config.runs < 2) throw std::invalid_argument("an experiment needs at least two runs");
    if (config.sample_size < 1) throw std::invalid_argument("sample size must be at least 1");
}

/**
 * Runs `config.runs` independent trajectories (concurrently when threads
 * allow) and summarizes their Pearson coefficients. Runs are stored by
 * index, so the result does not depend on scheduling.
 */
inline ExperimentSummary run_experiment(const ExperimentConfig& config)
{
    validate(config);
    ExperimentSummary summary;
    summary.config = config;
    summary.trajectories.resize(config.runs);

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.runs));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < config.runs; r = next++) {
            try {
                summary.trajectories[r] = run_trajectory(config, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> valid;
    for (const auto& t : summary.trajectories) {
        summary.per_run_pearson.push_back(t.pearson_r);
        if (t.pearson_r)
            valid.push_back(*t.pearson_r);
        else
            ++summary.degenerate_runs;
    }
    if (valid.size() >= 2) {
        const auto stats = summary_stats(valid);
        summary.mean = stats.mean;
        summary.standard_deviation = stats.standard_deviation;
    } else if (valid.size() == 1) {
        summary.mean = valid.front();
    }
    return summary;
}

} // namespace sboxtraj
