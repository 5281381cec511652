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

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("ldsma_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliRun run(const std::string& args) const
    {
        const auto out = dir_ / "stdout.txt";
        const auto err = dir_ / "stderr.txt";
        const std::string cmd = std::string("'") + LDSMA_CLI_PATH + "' " + args + " >'" + out.string() + "' 2>'" +
                                err.string() + "'";
        CliRun r;
        const int raw = std::system(cmd.c_str());
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = read(out);
        r.err = read(err);
        return r;
    }

    static std::string read(const fs::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    static std::vector<std::string> lines(const std::string& text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            out.push_back(line);
        return out;
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, Version)
{
    const auto r = run("--version");
    EXPECT_EQ(r.status, 0);
    EXPECT_FALSE(r.out.empty());
}

TEST_F(CliTest, SingleUserAllSchemes)
{
    const auto r = run("single-user --subcarriers 4 --spreading 2 --trials 100 --seed 5 --output " + path("su.csv") +
                       " --summary " + path("su.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = lines(read(path("su.csv")));
    ASSERT_EQ(rows.size(), 401u);
    EXPECT_EQ(rows.front(), "trial_id,scheme,N,d_v,snr_db,seed,rate_bits");
    EXPECT_TRUE(fs::exists(path("su.json")));
}

TEST_F(CliTest, SingleUserRefusesOversizedBruteForce)
{
    const auto r = run("single-user --subcarriers 32 --spreading 2 --trials 1 --seed 1 --schemes bruteforce");
    EXPECT_EQ(r.status, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(run("multiuser --algorithm tdma --seed 1").status, 2);
    EXPECT_EQ(run("multiuser --algorithm mumrt").status, 2);
    EXPECT_EQ(run("multiuser --algorithm static --criterion sa1 --seed 1").status, 2);
    EXPECT_EQ(run("single-user --subcarriers 5 --spreading 2 --seed 1").status, 2);
    EXPECT_EQ(run("no-such-command").status, 2);
    EXPECT_EQ(run("sweep --out-dir " + path("x")).status, 2);
}

TEST_F(CliTest, MultiuserWritesRowsAndManifest)
{
    const auto r = run("multiuser --algorithm mumrt --users 8 --subcarriers 8 --loading 3 --spreading 2 --trials 10 "
                       "--seed 3 --output " + path("mu.csv"));
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = lines(read(path("mu.csv")));
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows.front(), "trial_id,algorithm,criterion,K,N,d_c,d_v,seed,spectral_efficiency_bps_hz,"
                            "outage_fraction,weighted_sum_rate,iterations");
    EXPECT_TRUE(fs::exists(path("mu.csv.manifest.json")));
}

TEST_F(CliTest, IdenticalSeedsGiveIdenticalBytes)
{
    const std::string args = "multiuser --algorithm muwf --criterion sa2 --users 6 --subcarriers 6 --loading 2 "
                             "--spreading 2 --trials 5 --seed 42 --output ";
    ASSERT_EQ(run(args + path("a.csv")).status, 0);
    ASSERT_EQ(run(args + path("b.csv")).status, 0);
    EXPECT_EQ(read(path("a.csv")), read(path("b.csv")));

    const std::string su = "single-user --subcarriers 8 --trials 20 --seed 42 --output ";
    ASSERT_EQ(run(su + path("c.csv")).status, 0);
    ASSERT_EQ(run(su + path("d.csv")).status, 0);
    EXPECT_EQ(read(path("c.csv")), read(path("d.csv")));

    const auto other = run("multiuser --algorithm muwf --criterion sa2 --users 6 --subcarriers 6 --loading 2 "
                           "--spreading 2 --trials 5 --seed 43 --output " + path("e.csv"));
    ASSERT_EQ(other.status, 0);
    EXPECT_NE(read(path("a.csv")), read(path("e.csv")));
}

TEST_F(CliTest, AppendKeepsOneHeader)
{
    const std::string args = "multiuser --algorithm static --users 4 --subcarriers 4 --trials 3 --seed 1 --append "
                             "--output " + path("app.csv");
    ASSERT_EQ(run(args).status, 0);
    ASSERT_EQ(run(args).status, 0);
    const auto rows = lines(read(path("app.csv")));
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0].rfind("trial_id,", 0), 0u);
    EXPECT_NE(rows[4].rfind("trial_id,", 0), 0u);
}

TEST_F(CliTest, SweepReplaysFromManifest)
{
    {
        std::ofstream cfg(path("exp.cfg"));
        cfg << "version = 1\nusers = 6\nsubcarriers = 6\nloading = 3\nspreading = 2\n"
               "algorithm = mumrt\nsweep = loading\nvalues = 2, 3\ntrials = 4\nseed = 11\n";
    }
    ASSERT_EQ(run("sweep --config " + path("exp.cfg") + " --out-dir " + path("first")).status, 0);
    ASSERT_EQ(run("sweep --manifest " + path("first/manifest.json") + " --out-dir " + path("second")).status, 0);

    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(path("first"))) {
        const auto name = entry.path().filename().string();
        if (name == "manifest.json")
            continue;
        ASSERT_TRUE(fs::exists(path("second/" + name))) << name;
        EXPECT_EQ(read(entry.path()), read(path("second/" + name))) << name;
        ++compared;
    }
    EXPECT_GE(compared, 4u);
    EXPECT_TRUE(fs::exists(path("first/summary.csv")));
    EXPECT_TRUE(fs::exists(path("first/summary.json")));
}

TEST_F(CliTest, ConfigErrorsAreUsageErrors)
{
    {
        std::ofstream cfg(path("bad.cfg"));
        cfg << "version = 1\nseed = 1\nfoo = 2\n";
    }
    const auto r = run("sweep --config " + path("bad.cfg") + " --out-dir " + path("out"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.err.find("bad.cfg:3:"), std::string::npos) << r.err;
}
