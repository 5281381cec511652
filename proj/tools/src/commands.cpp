// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The ldsma authors
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

#include "ldsma/cli/commands.hpp"

#include "ldsma/cli/config.hpp"
#include "ldsma/cli/output.hpp"
#include "ldsma/partition.hpp"
#include "ldsma/power.hpp"
#include "ldsma/rng.hpp"
#include "ldsma/version.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldsma::cli {

namespace {

namespace fs = std::filesystem;

// Invalid flag combinations detected after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void print_error(const std::string& message)
{
    std::fflush(stdout);
    std::fprintf(stderr, "ldsma: error: %s\n", message.c_str());
}

// Text block printed next to the CSV: to stderr when the CSV goes to stdout.
void print_report(const std::string& output, const std::string& text)
{
    std::FILE* dst = output == "-" ? stderr : stdout;
    std::fputs(text.c_str(), dst);
    std::fflush(dst);
}

// ---------------------------------------------------------------- single-user

struct SingleUserArgs {
    std::size_t subcarriers = 8;
    std::size_t spreading = 2;
    double snr_db = -7.0;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::vector<std::string> schemes{"greedy", "lmv", "random", "bruteforce"};
    std::string output = "-";
    std::string summary;
    bool append = false;
};

enum class Scheme { greedy, lmv, random, bruteforce };

Scheme parse_scheme(const std::string& s)
{
    if (s == "greedy")
        return Scheme::greedy;
    if (s == "lmv")
        return Scheme::lmv;
    if (s == "random")
        return Scheme::random;
    if (s == "bruteforce")
        return Scheme::bruteforce;
    throw UsageError(fmt::format("unknown scheme '{}' (valid: greedy, lmv, random, bruteforce)", s));
}

// Unit-mean Ped-B gains of one trial scaled to the requested mean SNR (unit power).
std::vector<double> single_user_gains(const SingleUserArgs& a, std::size_t trial)
{
    SystemConfig c;
    c.num_users = 1;
    c.num_subcarriers = a.subcarriers;
    c.spreading = a.spreading;
    c.rng_seed = rng::derive_seed(a.seed, rng::Stream::single_user, trial);
    const auto alpha = fading_profile(c, 0);
    const double snr = std::pow(10.0, a.snr_db / 10.0);
    std::vector<double> g(alpha.size());
    for (std::size_t n = 0; n < g.size(); ++n)
        g[n] = std::norm(alpha[n]) * snr;
    return g;
}

int cmd_single_user(const SingleUserArgs& a)
{
    const std::size_t n = a.subcarriers;
    const std::size_t dv = a.spreading;
    if (dv > n || n % dv != 0)
        throw UsageError(fmt::format("--subcarriers {} must be a multiple of --spreading {}", n, dv));

    std::vector<Scheme> schemes;
    for (const auto& s : a.schemes) {
        const auto scheme = parse_scheme(s);
        if (std::find(schemes.begin(), schemes.end(), scheme) != schemes.end())
            throw UsageError(fmt::format("scheme '{}' listed twice", s));
        schemes.push_back(scheme);
    }
    if (schemes.empty())
        throw UsageError("--schemes is empty");
    for (auto s : schemes) {
        if (s == Scheme::lmv && dv != 2 && dv != 3)
            throw UsageError("the lmv scheme needs --spreading 2 or 3");
        if (s == Scheme::bruteforce) {
            std::uint64_t count = 0;
            bool overflow = false;
            try {
                count = su::count_lds_partitions(n, dv);
            } catch (const std::overflow_error&) {
                overflow = true;
            }
            if (overflow || count > su::kEnumerationCap)
                throw UsageError(fmt::format("bruteforce with N={} and d_v={} exceeds the enumeration cap of {} "
                                             "partitions",
                                             n, dv, su::kEnumerationCap));
        }
    }

    CsvWriter csv(a.output, "trial_id,scheme,N,d_v,snr_db,seed,rate_bits", a.append);
    std::vector<std::vector<double>> rates(schemes.size());
    for (std::size_t t = 0; t < a.trials; ++t) {
        const auto g = single_user_gains(a, t);
        const auto trial_seed = rng::derive_seed(a.seed, rng::Stream::single_user, t);
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            double rate = 0.0;
            switch (schemes[i]) {
            case Scheme::greedy:
                rate = su::mrt_wf(su::partition_greedy(g, dv), g, 1.0).rate;
                break;
            case Scheme::lmv:
                rate = su::mrt_wf(su::partition_lmv(g, dv), g, 1.0).rate;
                break;
            case Scheme::random:
                rate = su::mrt_wf(su::partition_random(g, dv, rng::derive_seed(a.seed, rng::Stream::partition, t)),
                                  g, 1.0)
                           .rate;
                break;
            case Scheme::bruteforce:
                rate = su::partition_bruteforce(g, dv, 1.0).rate;
                break;
            }
            rates[i].push_back(rate);
            csv.write_line(fmt::format("{},{},{},{},{},{},{}", t, a.schemes[i], n, dv, a.snr_db, trial_seed, rate));
        }
    }
    csv.close();

    std::vector<harness::Statistic> stats;
    double best = 0.0;
    for (const auto& r : rates) {
        stats.push_back(harness::summarize(r));
        best = std::max(best, stats.back().mean);
    }
    std::string report = fmt::format("scheme        mean_rate   ci95       ratio_to_best   (N={}, d_v={}, {} trials)\n",
                                     n, dv, a.trials);
    nlohmann::json doc;
    doc["N"] = n;
    doc["d_v"] = dv;
    doc["snr_db"] = a.snr_db;
    doc["trials"] = a.trials;
    doc["seed"] = a.seed;
    doc["schemes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const double ratio = best > 0.0 ? stats[i].mean / best : 0.0;
        const double hw = stats[i].half_width.value_or(0.0);
        report += fmt::format("{:<12}  {:<10.6f}  {:<9.6f}  {:.4f}\n", a.schemes[i], stats[i].mean, hw, ratio);
        nlohmann::json s;
        s["scheme"] = a.schemes[i];
        s["mean_rate_bits"] = stats[i].mean;
        s["ci95_half_width"] = stats[i].half_width ? nlohmann::json(*stats[i].half_width) : nlohmann::json(nullptr);
        s["ratio_to_best"] = ratio;
        doc["schemes"].push_back(std::move(s));
    }
    print_report(a.output, report);
    if (!a.summary.empty())
        write_text_file(a.summary, doc.dump(2) + "\n");
    return kSuccess;
}

// ---------------------------------------------------------------- multiuser

struct MultiuserArgs {
    std::string algorithm = "mumrt";
    std::string criterion;
    SystemConfig config;
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string channel_profile = "ped_b";
    std::string output = "-";
    std::string summary;
    std::string manifest;
    bool append = false;
};

std::string point_report(const harness::PointSummary& s)
{
    auto ci = [](const harness::Statistic& st) {
        return st.half_width ? fmt::format(" +/- {:.4f}", *st.half_width) : std::string();
    };
    std::string label = s.point.selector.label();
    if (s.point.selector.algorithm == harness::Algorithm::ofdma)
        label += " (orthogonal stand-in)";
    std::string line = fmt::format("{}: K={} N={} d_c={} d_v={} trials={} SE={:.4f}{} bps/Hz outage={:.4f}{}", label,
                                   s.point.config.num_users, s.point.config.num_subcarriers, s.point.config.loading,
                                   s.point.config.spreading, s.trials, s.spectral_efficiency.mean,
                                   ci(s.spectral_efficiency), s.outage.mean, ci(s.outage));
    if (s.invalid > 0)
        line += fmt::format(" invalid={}", s.invalid);
    return line + "\n";
}

int cmd_multiuser(const MultiuserArgs& a, bool criterion_given)
{
    harness::ExperimentSpec spec;
    spec.base = a.config;
    spec.trials = a.trials;
    spec.master_seed = a.seed;
    spec.threads = a.threads;
    try {
        spec.selector.algorithm = harness::parse_algorithm(a.algorithm);
        if (criterion_given) {
            if (!harness::uses_criterion(spec.selector.algorithm))
                throw UsageError(fmt::format("--criterion does not apply to algorithm '{}'", a.algorithm));
            spec.selector.criterion = mu::parse_criterion(a.criterion);
        }
        spec.channel = parse_channel_profile(a.channel_profile);
        spec.base.rng_seed = a.seed;
        harness::expand_points(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto point = harness::expand_points(spec).front();

    std::string manifest = a.manifest;
    if (manifest.empty() && a.output != "-")
        manifest = a.output + ".manifest.json";
    if (!manifest.empty()) {
        ManifestInfo info{"multiuser", spec, {{"trials_csv", a.output}}, utc_timestamp()};
        if (!a.summary.empty())
            info.outputs.emplace_back("summary_json", a.summary);
        write_text_file(manifest, manifest_json(info));
    }

    const auto trials = harness::run_trials(point.config, point.selector, spec.trials, spec.threads, spec.channel);
    CsvWriter csv(a.output, trial_csv_header(), a.append);
    for (const auto& t : trials)
        csv.write_line(trial_csv_row(point, t));
    csv.close();

    const auto summary = harness::summarize_point(point, trials);
    std::fputs(point_report(summary).c_str(), stderr);
    if (!a.summary.empty())
        write_text_file(a.summary, summary_json(harness::SweepParameter::none, {summary}));
    return kSuccess;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::string config;
    std::string manifest;
    std::string out_dir;
    std::size_t threads = 0;
};

std::string file_safe(const std::string& s)
{
    std::string out;
    for (char c : s)
        out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ? c : '_';
    return out;
}

int cmd_sweep(const SweepArgs& a)
{
    harness::ExperimentSpec spec;
    std::string source;
    if (!a.config.empty()) {
        spec = read_experiment_config(a.config);
    } else {
        if (!fs::exists(a.manifest))
            throw UsageError(fmt::format("manifest '{}' does not exist", a.manifest));
        std::ifstream in(a.manifest, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        spec = spec_from_manifest(text, a.manifest);
    }
    if (spec.parameter == harness::SweepParameter::none)
        throw UsageError("the experiment defines no sweep; use 'sweep = <parameter>' with 'values'");
    if (a.threads > 0)
        spec.threads = a.threads;
    const auto points = harness::expand_points(spec);

    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> names;
    ManifestInfo info{"sweep", spec, {}, utc_timestamp()};
    for (std::size_t i = 0; i < points.size(); ++i) {
        names.push_back(fmt::format("point_{:02}_{}_{}.csv", i, harness::to_string(spec.parameter),
                                    file_safe(points[i].value)));
        info.outputs.emplace_back(fmt::format("point_{:02}", i), names.back());
    }
    info.outputs.emplace_back("summary_csv", "summary.csv");
    info.outputs.emplace_back("summary_json", "summary.json");
    write_text_file(dir / "manifest.json", manifest_json(info));

    std::vector<harness::PointSummary> summaries;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        std::fprintf(stderr, "[%zu/%zu] %s = %s\n", i + 1, points.size(),
                     std::string(harness::to_string(spec.parameter)).c_str(), p.value.c_str());
        const auto trials = harness::run_trials(p.config, p.selector, spec.trials, spec.threads, spec.channel);
        CsvWriter csv((dir / names[i]).string(), trial_csv_header(), false);
        for (const auto& t : trials)
            csv.write_line(trial_csv_row(p, t));
        csv.close();
        summaries.push_back(harness::summarize_point(p, trials));
        std::fputs(point_report(summaries.back()).c_str(), stderr);
    }

    CsvWriter csv((dir / "summary.csv").string(), summary_csv_header(), false);
    for (const auto& s : summaries)
        csv.write_line(summary_csv_row(spec.parameter, s));
    csv.close();
    write_text_file(dir / "summary.json", summary_json(spec.parameter, summaries));
    return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"Resource allocation and Monte Carlo simulation for uplink MC-LDSMA", "ldsma"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SingleUserArgs su_args;
    auto* su_cmd = app.add_subcommand("single-user", "Compare subcarrier partitioning schemes for one user");
    su_cmd->add_option("--subcarriers", su_args.subcarriers, "Subcarriers of the user (N_k)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    su_cmd->add_option("--spreading", su_args.spreading, "Subcarriers per symbol (d_v)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    su_cmd->add_option("--snr-db", su_args.snr_db, "Mean per-subcarrier SNR at unit total power, dB")
        ->capture_default_str();
    su_cmd->add_option("--trials", su_args.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    su_cmd->add_option("--seed", su_args.seed, "Master seed")->required();
    su_cmd->add_option("--schemes", su_args.schemes, "Comma-separated subset of greedy,lmv,random,bruteforce")
        ->delimiter(',')
        ->capture_default_str();
    su_cmd->add_option("--output", su_args.output, "Per-trial CSV ('-' for stdout)")->capture_default_str();
    su_cmd->add_option("--summary", su_args.summary, "Write the summary as JSON to this file");
    su_cmd->add_flag("--append", su_args.append, "Append to the CSV instead of truncating it");

    MultiuserArgs mu_args;
    auto* mu_cmd = app.add_subcommand("multiuser", "Run one multiuser configuration over many trials");
    mu_cmd->add_option("--algorithm", mu_args.algorithm, "Allocator")
        ->check(CLI::IsMember({"mumrt", "muwf", "static", "ofdma", "macref"}, CLI::ignore_case))
        ->capture_default_str();
    auto* crit_opt = mu_cmd->add_option("--criterion", mu_args.criterion, "Subcarrier selection criterion (default sa1)")
                         ->check(CLI::IsMember({"sa1", "sa2"}, CLI::ignore_case));
    mu_cmd->add_option("--users", mu_args.config.num_users, "Users (K)")->check(CLI::PositiveNumber)->capture_default_str();
    mu_cmd->add_option("--subcarriers", mu_args.config.num_subcarriers, "Subcarriers (N)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mu_cmd->add_option("--loading", mu_args.config.loading, "Users per subcarrier (d_c)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mu_cmd->add_option("--spreading", mu_args.config.spreading, "Subcarriers per symbol (d_v)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mu_cmd->add_option("--bandwidth-hz", mu_args.config.bandwidth_hz, "System bandwidth")->capture_default_str();
    mu_cmd->add_option("--max-power-dbm", mu_args.config.max_power_dbm, "Per-user power budget")->capture_default_str();
    mu_cmd->add_option("--noise-psd-dbm-hz", mu_args.config.noise_psd_dbm_hz, "Noise power spectral density")
        ->capture_default_str();
    mu_cmd->add_option("--inradius-m", mu_args.config.cell_inradius_m, "Hexagonal cell inradius")->capture_default_str();
    mu_cmd->add_option("--channel-profile", mu_args.channel_profile, "ped_b or flat")
        ->check(CLI::IsMember({"ped_b", "flat"}))
        ->capture_default_str();
    mu_cmd->add_option("--trials", mu_args.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    mu_cmd->add_option("--seed", mu_args.seed, "Master seed")->required();
    mu_cmd->add_option("--threads", mu_args.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    mu_cmd->add_option("--output", mu_args.output, "Per-trial CSV ('-' for stdout)")->capture_default_str();
    mu_cmd->add_option("--summary", mu_args.summary, "Write the aggregate as JSON to this file");
    mu_cmd->add_option("--manifest", mu_args.manifest, "Manifest path (default <output>.manifest.json)");
    mu_cmd->add_flag("--append", mu_args.append, "Append to the CSV instead of truncating it");

    SweepArgs sw_args;
    auto* sw_cmd = app.add_subcommand("sweep", "Run an experiment file or replay a manifest");
    auto* cfg_opt = sw_cmd->add_option("--config", sw_args.config, "Experiment file")->check(CLI::ExistingFile);
    auto* man_opt = sw_cmd->add_option("--manifest", sw_args.manifest, "Manifest written by an earlier sweep");
    cfg_opt->excludes(man_opt);
    sw_cmd->add_option("--out-dir", sw_args.out_dir, "Output directory")->required();
    sw_cmd->add_option("--threads", sw_args.threads, "Override the worker thread count")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
        if (sw_cmd->parsed() && cfg_opt->count() == 0 && man_opt->count() == 0)
            throw CLI::RequiredError("sweep needs --config or --manifest");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (su_cmd->parsed())
            return cmd_single_user(su_args);
        if (mu_cmd->parsed())
            return cmd_multiuser(mu_args, crit_opt->count() > 0);
        return cmd_sweep(sw_args);
    } catch (const UsageError& e) {
        print_error(e.what());
        return kUsageError;
    } catch (const ConfigError& e) {
        print_error(e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        print_error(e.what());
        return kRuntimeError;
    }
}

} // namespace ldsma::cli
