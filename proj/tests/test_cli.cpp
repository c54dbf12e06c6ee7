#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "wallis/cli/commands.hpp"

using namespace wallis;
using namespace wallis::cli;
using nlohmann::ordered_json;

namespace {

std::string cell(const OutputRecord& r, std::size_t row, const std::string& column)
{
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        if (r.columns[c] == column) {
            return r.rows.at(row).at(c);
        }
    }
    throw std::out_of_range("no column " + column);
}

std::vector<std::string> values_named(const OutputRecord& r, const std::string& name)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (cell(r, i, "name") == name) {
            out.push_back(cell(r, i, "value"));
        }
    }
    return out;
}

struct Run {
    int exit_code;
    std::string out;
};

Run run_cli(const std::string& args)
{
    const std::string command = std::string(WALLIS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        throw std::runtime_error("popen failed");
    }
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) {
        out.append(buf, got);
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

CertificateReport synthetic(InequalityId id, std::vector<Verdict> verdicts)
{
    CertificateReport r{id, 2, 2 + verdicts.size() - 1, std::move(verdicts), {}, 128};
    for (auto v : r.verdicts) {
        switch (v) {
        case Verdict::HoldsStrict: ++r.counts.holds_strict; break;
        case Verdict::HoldsWithEquality: ++r.counts.holds_with_equality; break;
        case Verdict::Violated: ++r.counts.violated; break;
        case Verdict::Undecidable: ++r.counts.undecidable; break;
        }
    }
    return r;
}

const std::regex kDecimal(R"(^-?[1-9]\.[0-9]*e-?[0-9]+$)");
const std::regex kRational(R"(^-?[0-9]+(/[1-9][0-9]*)?$)");

} // namespace

TEST(CmdCoeffs, SixGivesPublishedCorrection)
{
    const auto r = cmd_coeffs(6);
    EXPECT_EQ(values_named(r, "a"), (std::vector<std::string>{"0", "1/24", "1/48", "1/160", "1/960"}));
    EXPECT_EQ(values_named(r, "x"), (std::vector<std::string>{"0", "1/12", "-1/16", "1/15", "-11/192"}));
    EXPECT_EQ(r.summary["round_trip"], "pass");
}

TEST(CmdCoeffs, SmallAndLarge)
{
    const auto two = cmd_coeffs(2);
    EXPECT_EQ(values_named(two, "a"), std::vector<std::string>{"0"});

    const auto ten = cmd_coeffs(10);
    const auto a = values_named(ten, "a");
    // x_2..x_10 is nine values; a_1..a_9 is nine as well
    EXPECT_EQ(values_named(ten, "x").size(), 9u);
    ASSERT_EQ(a.size(), 9u);
    EXPECT_EQ(a.back(), "-73/46080");
    EXPECT_EQ(ten.summary["round_trip"], "pass");
    for (const auto& v : a) {
        EXPECT_TRUE(std::regex_match(v, kRational)) << v;
    }
    EXPECT_THROW(cmd_coeffs(1), UsageError);
}

TEST(CmdTable, DefaultRows)
{
    const auto r = cmd_table(default_table_ns());
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.exit_code, kPass);
    EXPECT_EQ(cell(r, 1, "n"), "100");
    EXPECT_EQ(cell(r, 1, "w_minus_chi"), "2.8269e-4");
    EXPECT_EQ(cell(r, 1, "w_minus_mu"), "3.9124e-10");
    EXPECT_EQ(cell(r, 1, "w_minus_chi_digits"), "5");
    EXPECT_EQ(cell(r, 1, "w_minus_mu_digits"), "5");
}

TEST(CmdTable, SingleRows)
{
    const auto fifty = cmd_table({50});
    EXPECT_EQ(cell(fifty, 0, "w_minus_chi"), "8.0124e-4");
    EXPECT_EQ(cell(fifty, 0, "w_minus_mu"), "4.4198e-9");

    const auto two = cmd_table({2});
    EXPECT_EQ(cell(two, 0, "wallis_exact"), "3/8");
    EXPECT_TRUE(std::regex_match(cell(two, 0, "w_minus_chi"), kDecimal));

    EXPECT_THROW(cmd_table({1}), UsageError);
    EXPECT_THROW(cmd_table({}), UsageError);
}

TEST(CmdTable, UnpinnedAtCapIsUndecidable)
{
    const auto r = cmd_table({1000}, {16, 16});
    EXPECT_EQ(r.exit_code, kUndecidable);
    EXPECT_EQ(cell(r, 0, "w_minus_mu"), "");
    EXPECT_EQ(cell(r, 0, "w_minus_mu_digits"), "0");
}

TEST(CmdVerify, UpperBoundToHundred)
{
    VerifyOptions opt;
    opt.ids = {InequalityId::U_UPPER};
    opt.n_min = 2;
    opt.n_max = 100;
    const auto r = cmd_verify(opt);
    EXPECT_EQ(r.exit_code, kPass);
    EXPECT_EQ(cell(r, 0, "holds_with_equality"), "1");
    EXPECT_EQ(cell(r, 0, "equality_at"), "2");
    EXPECT_EQ(cell(r, 0, "summary"), "pass");
}

TEST(CmdVerify, PerNRows)
{
    VerifyOptions opt;
    opt.ids = {InequalityId::THM3};
    opt.n_max = 20;
    opt.per_n = true;
    const auto r = cmd_verify(opt);
    ASSERT_EQ(r.rows.size(), 20u);
    EXPECT_EQ(cell(r, 0, "n"), "1");
    EXPECT_EQ(cell(r, 19, "verdict"), "HoldsStrict");
}

TEST(CmdVerify, RangeGuards)
{
    VerifyOptions opt;
    opt.ids = {InequalityId::U_LOWER};
    opt.n_min = 1;
    opt.n_max = 10;
    EXPECT_THROW(cmd_verify(opt), UsageError);
    opt.n_min = 20;
    EXPECT_THROW(cmd_verify(opt), UsageError);
}

TEST(ExitCodes, SyntheticReports)
{
    const auto ok = synthetic(InequalityId::THM3, {Verdict::HoldsStrict, Verdict::HoldsWithEquality});
    const auto bad = synthetic(InequalityId::THM3, {Verdict::HoldsStrict, Verdict::Violated});
    const auto unsure = synthetic(InequalityId::THM3, {Verdict::Undecidable, Verdict::HoldsStrict});
    EXPECT_EQ(exit_code_for({ok}), kPass);
    EXPECT_EQ(exit_code_for({ok, unsure}), kUndecidable);
    EXPECT_EQ(exit_code_for({unsure, bad}), kViolation);

    const auto record = verify_record({ok, bad}, VerifyOptions{});
    EXPECT_EQ(record.exit_code, kViolation);
    EXPECT_EQ(cell(record, 1, "violated_at"), "3");
    EXPECT_EQ(cell(record, 1, "summary"), "fail");
    EXPECT_EQ(record.summary["result"], "fail");
}

TEST(CmdRate, ChiOrderTwo)
{
    RateOptions opt;
    opt.candidates = {family::A{-1}};
    const auto r = cmd_rate(opt);
    EXPECT_EQ(r.exit_code, kPass);
    EXPECT_EQ(cell(r, 0, "status"), "nonzero");
    EXPECT_NEAR(std::stod(cell(r, 0, "limit")), 0.5, 1e-3);
    EXPECT_TRUE(std::regex_match(cell(r, 0, "limit"), kDecimal));
    EXPECT_GE(std::stoi(cell(r, 0, "limit_digits")), 1);
}

TEST(CmdRate, MuOrderFour)
{
    RateOptions opt;
    opt.candidates = {family::BC{ExactRational(1, 3), ExactRational(1, 3)}};
    opt.k = 4;
    const auto r = cmd_rate(opt);
    EXPECT_NEAR(std::stod(cell(r, 0, "limit")), 1.0 / 48, 1e-2);
    EXPECT_NEAR(std::stod(cell(r, 0, "scaled_residual")), 1.0 / 144, 1e-2);
}

TEST(CmdRate, FamilyAZeroVanishes)
{
    RateOptions opt;
    opt.candidates = {family::A{0}};
    const auto r = cmd_rate(opt);
    EXPECT_EQ(cell(r, 0, "status"), "vanishes; try k+1");
    EXPECT_EQ(r.exit_code, kPass);
}

TEST(CmdRate, RankingAcrossCandidates)
{
    RateOptions opt;
    for (const char* a : {"-1", "-1/2", "0", "1/2", "1"}) {
        opt.candidates.emplace_back(family::A{ExactRational::parse(a)});
    }
    const auto r = cmd_rate(opt);
    ASSERT_TRUE(r.summary.contains("ranking"));
    EXPECT_EQ(r.summary["ranking"][0]["candidate"], "a(a=0)");
    EXPECT_EQ(cell(r, 2, "rank"), "1");
}

TEST(CmdRate, InconsistentTrendIsExitThree)
{
    RateOptions opt;
    opt.candidates = {family::A{1}};
    opt.k = 3;
    const auto r = cmd_rate(opt);
    EXPECT_EQ(r.exit_code, kInconsistentTrend);
    EXPECT_EQ(cell(r, 0, "status"), "inconsistent trend");
    ASSERT_TRUE(r.summary.contains("diagnostics"));
}

TEST(Json, Schema)
{
    const auto j = ordered_json::parse(render_json(cmd_table({50, 100})));
    for (const char* key : {"command", "parameters", "rows", "exit_semantics"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["command"], "table");
    EXPECT_TRUE(j["parameters"].is_object());
    ASSERT_EQ(j["rows"].size(), 2u);
    for (const auto& row : j["rows"]) {
        for (const auto& [key, value] : row.items()) {
            ASSERT_TRUE(value.is_string()) << key;
        }
        EXPECT_TRUE(std::regex_match(row["w_minus_chi"].get<std::string>(), kDecimal));
        EXPECT_TRUE(std::regex_match(row["wallis_exact"].get<std::string>(), kRational));
        EXPECT_EQ(row["w_minus_chi_digits"], "5");
    }
    EXPECT_EQ(j["exit_semantics"]["64"], "usage");
}

TEST(Csv, RoundTripsThroughJsonRows)
{
    RateOptions opt;
    opt.candidates = {family::A{1}, family::A{0}};
    for (const auto& record : {cmd_table(default_table_ns()), cmd_coeffs(8), cmd_rate(opt)}) {
        const auto direct = to_json_value(record)["rows"];
        EXPECT_EQ(csv_to_json_rows(render_csv(record)), direct) << record.command;
    }
}

TEST(Csv, Quoting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    const auto table = parse_csv("x,y\n\"1,2\",\"a\"\"b\"\n");
    ASSERT_EQ(table.size(), 2u);
    EXPECT_EQ(table[1][0], "1,2");
    EXPECT_EQ(table[1][1], "a\"b");
}

TEST(Determinism, ByteIdenticalRecords)
{
    EXPECT_EQ(render_json(cmd_table({50, 250})), render_json(cmd_table({50, 250})));
    VerifyOptions opt;
    opt.n_max = 300;
    opt.workers = 3;
    EXPECT_EQ(render_csv(cmd_verify(opt)), render_csv(cmd_verify(opt)));
}

TEST(Binary, ExitCodes)
{
    EXPECT_EQ(run_cli("coeffs -K 6").exit_code, 0);
    EXPECT_EQ(run_cli("verify U_LOWER --n-min 1 --n-max 10").exit_code, 64);
    EXPECT_EQ(run_cli("verify U_UPPER --n-max 100").exit_code, 0);
    EXPECT_EQ(run_cli("verify NOPE").exit_code, 64);
    EXPECT_EQ(run_cli("rate --family a --a 1 -k 3").exit_code, 3);
    EXPECT_EQ(run_cli("table -n 1").exit_code, 64);
    EXPECT_EQ(run_cli("table -n 1000 --precision-bits 16 --precision-cap 16").exit_code, 2);
    EXPECT_EQ(run_cli("table --no-such-flag").exit_code, 64);
    EXPECT_EQ(run_cli("").exit_code, 64);
    EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST(Binary, OutputFormats)
{
    const auto json = run_cli("coeffs -K 6 --format json");
    const auto j = ordered_json::parse(json.out);
    EXPECT_EQ(j["command"], "coeffs");
    const auto csv = run_cli("coeffs -K 6 --format csv");
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "name,index,value");
    EXPECT_EQ(csv_to_json_rows(csv.out), j["rows"]);
    EXPECT_EQ(run_cli("coeffs -K 6").out, run_cli("coeffs -K 6").out);
}

TEST(Binary, WritesOutFile)
{
    const auto path = std::filesystem::temp_directory_path() / "wallis_cli_test_table.csv";
    std::filesystem::remove(path);
    const auto r = run_cli("table -n 50 --format csv --out " + path.string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    EXPECT_NE(ss.str().find("8.0124e-4"), std::string::npos);
    std::filesystem::remove(path);
}
