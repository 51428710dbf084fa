#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include <vcoarse/errors.hpp>

#include "commands.hpp"

namespace vcoarse::cli
{
namespace
{

std::string config(const std::string &name)
{
    return std::string(VCOARSE_CONFIG_DIR) + "/" + name;
}

Options command(const std::string &name)
{
    Options o;
    o.command = name;
    return o;
}

TEST(Cli, Sha256KnownVector)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, AbhyankarReport)
{
    Options o = command("abhyankar");
    o.p = 3;
    o.depth = 15;
    const Outcome out = run(o);
    EXPECT_EQ(out.exit_code, kExitOk);
    const Json &r = out.report;
    EXPECT_EQ(r["status"], "PASS");
    EXPECT_EQ(r["tool"], "vcoarse");
    EXPECT_EQ(r["depth"], 15);
    EXPECT_EQ(r["config_hash"], sha256_hex(r["config"].dump()));
    for (const auto &[name, ok] : r["checks"].items()) {
        EXPECT_TRUE(ok.get<bool>()) << name;
    }
    EXPECT_EQ(dump(run(o).report), dump(r));
}

TEST(Cli, EveryBuiltinCommandPasses)
{
    for (const std::string name : {"example-e1", "example-e2", "prescribe", "kummer-mixed"}) {
        const Outcome out = run(command(name));
        EXPECT_EQ(out.exit_code, kExitOk) << name;
        EXPECT_EQ(out.report["status"], "PASS") << name;
    }
}

TEST(Cli, ConfigCommands)
{
    Options c = command("classify");
    c.config_path = config("synthetic-dependent.json");
    const Outcome classify = run(c);
    EXPECT_EQ(classify.report["status"], "COMPUTED");
    EXPECT_EQ(classify.exit_code, kExitOk);

    Options d = command("check-def");
    d.config_path = config("check-def-as.json");
    const Outcome defs = run(d);
    EXPECT_EQ(defs.report["status"], "PASS");
    EXPECT_EQ(defs.report["result"]["definitions"].size(), 3u);

    Options e = command("eval");
    e.config_path = config("eval-basic.json");
    EXPECT_EQ(run(e).exit_code, kExitOk);
}

TEST(Cli, FlagsOverrideConfig)
{
    Options d = command("check-def");
    d.config_path = config("check-def-as.json");
    d.samples = 10;
    d.seed = 99;
    const Outcome out = run(d);
    EXPECT_EQ(out.report["seed"], 99);
    EXPECT_EQ(out.report["config"]["samples"], 10);
    EXPECT_EQ(out.report["result"]["definitions"][0]["samples"], 10);
}

TEST(Cli, Errors)
{
    Options bad_format = command("abhyankar");
    bad_format.format = "yaml";
    EXPECT_THROW(run(bad_format), Error);

    Options bad_prime = command("abhyankar");
    bad_prime.p = 6;
    EXPECT_THROW(run(bad_prime), Error);

    Options missing = command("classify");
    EXPECT_THROW(run(missing), Error);

    Options bad_select = command("prescribe");
    bad_select.select = std::vector<std::size_t>{0};
    EXPECT_THROW(run(bad_select), InvalidSelectionError);
}

TEST(Cli, MainEntryExitCodes)
{
    const std::string path = ::testing::TempDir() + "vcoarse_cli_bad.json";
    {
        std::ofstream f(path);
        f << R"({"group": {"rank": 1, "components": ["pdiv"], "p": 2}, "extension": {"kind": "nope"}})";
    }
    std::string cmd = "classify";
    std::string flag = "--config";
    char *bad[] = {const_cast<char *>("vcoarse"), cmd.data(), flag.data(), const_cast<char *>(path.c_str()), nullptr};
    EXPECT_EQ(main_entry(4, bad), kExitError);

    const std::string out_path = ::testing::TempDir() + "vcoarse_cli_out.json";
    std::string e1 = "example-e1";
    std::string out_flag = "--out";
    char *good[] = {const_cast<char *>("vcoarse"), e1.data(), out_flag.data(), const_cast<char *>(out_path.c_str()), nullptr};
    EXPECT_EQ(main_entry(4, good), kExitOk);
    std::ifstream in(out_path);
    EXPECT_EQ(Json::parse(in)["status"], "PASS");
    std::remove(path.c_str());
    std::remove(out_path.c_str());
}

} // namespace
} // namespace vcoarse::cli
