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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "local_search.hpp"
#include "metrics.hpp"
#include "sbox.hpp"
#include "trajectory.hpp"

namespace sboxtraj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUnreliable = 2;

namespace fs = std::filesystem;

struct CliConfig {
    std::string command;
    int n = 0;
    int m = 0;
    std::string sbox_path;
    std::string metrics = "ccv,to,mto0,rto0";
    std::string format = "json";
    std::uint64_t seed = 1;
    std::string emit_climbs;
    std::string out;
    std::string metric;
    std::size_t runs = 30;
    std::size_t sample_size = 0; // 0: 30, or 1 for rto0
    std::string out_dir;
    std::string in_dir;
    unsigned threads = 0;
};

namespace detail {

inline std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

} // namespace detail

inline int cmd_metrics(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    static const std::vector<std::string> known = {"ccv", "to", "mto0", "rto0", "mto", "rto"};
    const auto requested = detail::split_list(cfg.metrics);
    if (requested.empty()) {
        err << "error: --metrics is empty\n";
        return kExitInvalid;
    }
    for (const auto& name : requested) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            err << "error: unknown metric '" << name << "'\n";
            return kExitInvalid;
        }
    }
    if (cfg.format != "json" && cfg.format != "csv") {
        err << "error: --format must be json or csv\n";
        return kExitInvalid;
    }

    std::optional<SBox> f;
    try {
        f = parse_sbox(detail::read_file(cfg.sbox_path), cfg.n, cfg.m);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    std::optional<CrossCorrelationTable> table;
    auto correlations = [&]() -> const CrossCorrelationTable& {
        if (!table) table = cross_correlation(*f);
        return *table;
    };
    std::vector<std::pair<std::string, double>> values;
    for (const auto& name : requested) {
        double v = 0.0;
        if (name == "ccv")
            v = ccv(*f);
        else if (name == "to")
            v = transparency_order(*f);
        else if (name == "mto0")
            v = mto_beta(correlations(), 0u);
        else if (name == "rto0")
            v = rto_beta(correlations(), 0u);
        else if (name == "mto")
            v = mto(correlations());
        else
            v = rto(correlations());
        values.emplace_back(name, v);
    }

    if (cfg.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [name, v] : values) j[name] = v;
        out << j.dump() << '\n';
    } else {
        out << "metric,value\n";
        for (const auto& [name, v] : values) out << name << ',' << io::format_real(v) << '\n';
    }
    return kExitOk;
}

inline int cmd_search(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (cfg.n < 2 || cfg.n > kMaxBits) {
        err << "error: --n must lie in [2, 16]\n";
        return kExitInvalid;
    }
    // Run 0 of an experiment with the same seed follows the same search.
    const SearchResult result = ls_hwf(cfg.n, RngStream(cfg.seed).child(0));
    try {
        if (cfg.out.empty())
            out << serialize(result.final);
        else
            detail::write_file(cfg.out, serialize(result.final));
        if (!cfg.emit_climbs.empty()) detail::write_file(cfg.emit_climbs, io::climbs_csv(result));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

inline int cmd_experiment(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto metric = parse_metric(cfg.metric);
    if (!metric) {
        err << "error: --metric must be one of to, mto0, rto0\n";
        return kExitInvalid;
    }
    ExperimentConfig config{.n = cfg.n,
                            .runs = cfg.runs,
                            .sample_size = cfg.sample_size ? cfg.sample_size : (*metric == Metric::RTO0 ? 1u : 30u),
                            .metric = *metric,
                            .master_seed = cfg.seed,
                            .threads = cfg.threads};
    try {
        validate(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    if (cfg.out_dir.empty()) {
        err << "error: --out-dir is required\n";
        return kExitInvalid;
    }

    const ExperimentSummary summary = run_experiment(config);
    try {
        fs::create_directories(cfg.out_dir);
        detail::write_file(fs::path(cfg.out_dir) / "trajectories.csv", io::trajectories_csv(summary));
        detail::write_file(fs::path(cfg.out_dir) / "summary.json", io::summary_json(summary).dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    out << "n=" << config.n << " metric=" << metric_name(config.metric) << " runs=" << config.runs
        << " valid=" << config.runs - summary.degenerate_runs;
    if (summary.mean) out << " mean=" << io::format_real(*summary.mean);
    if (summary.standard_deviation) out << " sd=" << io::format_real(*summary.standard_deviation);
    out << '\n';

    if (2 * summary.degenerate_runs > config.runs || !summary.standard_deviation) {
        err << "warning: " << summary.degenerate_runs << " of " << config.runs
            << " trajectories are degenerate; the summary is unreliable\n";
        return kExitUnreliable;
    }
    return kExitOk;
}

inline int cmd_export_plot(const CliConfig& cfg, std::ostream& out, std::ostream& err)
{
    const fs::path csv = fs::path(cfg.in_dir) / "trajectories.csv";
    if (!fs::is_regular_file(csv)) {
        err << "error: '" << csv.string() << "' not found\n";
        return kExitInvalid;
    }
    try {
        std::ifstream in(csv);
        const auto groups = io::read_trajectories_csv(in);
        std::size_t emitted = 0;
        const std::string data = io::plot_data(groups, &emitted);
        if (cfg.out.empty())
            out << data;
        else
            detail::write_file(cfg.out, data);
        err << "exported " << emitted << " trajectories\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"S-box side-channel metrics, LS-HWF search and trajectory experiments"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto* metrics = app.add_subcommand("metrics", "Compute metrics of an S-box file");
    metrics->add_option("--sbox", cfg.sbox_path, "S-box file (decimal or 0x hex, comma/whitespace separated)")
        ->required();
    metrics->add_option("--n", cfg.n, "Input bits")->required()->check(CLI::Range(1, kMaxBits));
    metrics->add_option("--m", cfg.m, "Output bits")->required()->check(CLI::Range(1, kMaxBits));
    metrics->add_option("--metrics", cfg.metrics, "Comma list of ccv,to,mto0,rto0,mto,rto");
    metrics->add_option("--format", cfg.format, "json or csv");

    auto* search = app.add_subcommand("search", "Run one LS-HWF search");
    search->add_option("--n", cfg.n, "Input/output bits")->required();
    search->add_option("--seed", cfg.seed, "Master seed");
    search->add_option("--emit-climbs", cfg.emit_climbs, "Write accepted climbs as CSV");
    search->add_option("--out", cfg.out, "Write the final S-box here (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Run the trajectory-correlation experiment");
    experiment->add_option("--n", cfg.n, "Input/output bits")->required();
    experiment->add_option("--metric", cfg.metric, "to, mto0 or rto0")->required();
    experiment->add_option("--runs", cfg.runs, "Number of LS-HWF runs");
    experiment->add_option("--sample-size", cfg.sample_size, "S-boxes per climb (default 30, 1 for rto0)");
    experiment->add_option("--seed", cfg.seed, "Master seed");
    experiment->add_option("--out-dir", cfg.out_dir, "Output directory")->required();
    experiment->add_option("--threads", cfg.threads, "Worker threads (default: hardware concurrency)");

    auto* plot = app.add_subcommand("export-plot", "Convert trajectories.csv into plot data");
    plot->add_option("--in", cfg.in_dir, "Experiment directory")->required();
    plot->add_option("--out", cfg.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    try {
        if (metrics->parsed()) return cmd_metrics(cfg, out, err);
        if (search->parsed()) return cmd_search(cfg, out, err);
        if (experiment->parsed()) return cmd_experiment(cfg, out, err);
        return cmd_export_plot(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

} // namespace sboxtraj::cli
