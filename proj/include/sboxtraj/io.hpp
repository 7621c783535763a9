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

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "local_search.hpp"
#include "trajectory.hpp"

namespace sboxtraj::io {

inline constexpr std::string_view kTrajectoriesHeader = "run_id,climb_index,mean_ccv,mean_metric,metric";
inline constexpr std::string_view kClimbsHeader = "run_id,climb_index,i,j,ccv";

/// Shortest decimal form that parses back to the same double.
inline std::string format_real(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format floating-point value");
    return std::string(buf, ptr);
}

inline double parse_real(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("malformed number '" + std::string(s) + "'");
    return v;
}

inline std::string climbs_csv(const SearchResult& result, std::size_t run_id = 0)
{
    std::string out(kClimbsHeader);
    out += '\n';
    for (const auto& e : result.climbs) {
        out += std::to_string(run_id) + ',' + std::to_string(e.climb_index) + ',' + std::to_string(e.i) + ',' +
               std::to_string(e.j) + ',' + format_real(e.ccv_after) + '\n';
    }
    return out;
}

/// All runs interleaved in run order, one row per climb.
inline std::string trajectories_csv(const ExperimentSummary& summary)
{
    std::string out(kTrajectoriesHeader);
    out += '\n';
    for (const auto& t : summary.trajectories) {
        for (const auto& p : t.points) {
            out += std::to_string(t.run_id) + ',' + std::to_string(p.climb_index) + ',' + format_real(p.mean_ccv) +
                   ',' + format_real(p.mean_metric) + ',' + std::string(metric_name(p.metric)) + '\n';
        }
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const ExperimentSummary& summary)
{
    using nlohmann::ordered_json;
    const auto& c = summary.config;
    ordered_json j;
    j["config"] = {
        {"n", c.n},
        {"m", c.n},
        {"metric", metric_name(c.metric)},
        {"runs", c.runs},
        {"sample_size", c.sample_size},
        {"master_seed", c.master_seed},
        {"seed_mixer", kSeedMixer},
        {"seed_paths", "search: (master_seed, run); sample draw s at climb k: (master_seed, run, k, s)"},
        {"pair_order", "lexicographic (i, j), j > i; strict CCV improvement; first improvement, continuing scan"},
        {"sample_rule", "size 1 is F* itself; otherwise independent HW-class shuffles, duplicates allowed"},
        {"std_estimator", "sample standard deviation, divisor (valid runs - 1)"},
        {"degenerate_rule", "fewer than 2 points or a constant coordinate; excluded from mean and deviation"},
    };
    ordered_json pearson = ordered_json::array();
    ordered_json climbs = ordered_json::array();
    for (std::size_t r = 0; r < summary.trajectories.size(); ++r) {
        const auto& value = summary.per_run_pearson[r];
        pearson.push_back(value ? ordered_json(*value) : ordered_json(nullptr));
        climbs.push_back(summary.trajectories[r].points.size());
    }
    j["per_run_pearson"] = pearson;
    j["per_run_climbs"] = climbs;
    j["valid_runs"] = summary.trajectories.size() - summary.degenerate_runs;
    j["degenerate_runs"] = summary.degenerate_runs;
    j["mean"] = summary.mean ? ordered_json(*summary.mean) : ordered_json(nullptr);
    j["standard_deviation"] =
        summary.standard_deviation ? ordered_json(*summary.standard_deviation) : ordered_json(nullptr);
    return j;
}

struct CsvTrajectory {
    std::size_t run_id = 0;
    std::vector<TrajectoryPoint> points;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

inline std::size_t parse_index(std::string_view s)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("malformed integer '" + std::string(s) + "'");
    return v;
}

} // namespace detail

/// Reads trajectories.csv back into per-run groups, in order of first appearance.
inline std::vector<CsvTrajectory> read_trajectories_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty trajectories file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoriesHeader) throw std::runtime_error("unexpected trajectories header '" + line + "'");

    std::vector<CsvTrajectory> groups;
    std::map<std::size_t, std::size_t> slot;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 5) throw std::runtime_error("expected 5 fields in '" + line + "'");
        const auto metric = parse_metric(fields[4]);
        if (!metric) throw std::runtime_error("unknown metric '" + std::string(fields[4]) + "'");
        const std::size_t run = detail::parse_index(fields[0]);
        auto [it, inserted] = slot.try_emplace(run, groups.size());
        if (inserted) groups.push_back({run, {}});
        groups[it->second].points.push_back(TrajectoryPoint{.climb_index = detail::parse_index(fields[1]),
                                                            .mean_ccv = parse_real(fields[2]),
                                                            .mean_metric = parse_real(fields[3]),
                                                            .metric = *metric,
                                                            .sample_size = 0});
    }
    return groups;
}

/**
 * Gnuplot-style data: "x y" rows (x = mean CCV, y = mean metric), one group
 * per non-degenerate run, groups separated by a blank line.
 */
inline std::string plot_data(const std::vector<CsvTrajectory>& groups, std::size_t* emitted = nullptr)
{
    std::string out;
    std::size_t count = 0;
    for (const auto& g : groups) {
        try {
            (void)pearson(g.points);
        } catch (const DegenerateTrajectory&) {
            continue;
        }
        if (count > 0) out += '\n';
        out += "# run_id=" + std::to_string(g.run_id) + " metric=" + std::string(metric_name(g.points.front().metric)) +
               '\n';
        for (const auto& p : g.points) out += format_real(p.mean_ccv) + ' ' + format_real(p.mean_metric) + '\n';
        ++count;
    }
    if (emitted) *emitted = count;
    return out;
}

} // namespace sboxtraj::io
