#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SEMIRANK_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(Cli, DecodeAndEncode) {
    auto r = run("decode --q 2 --n 4 33825");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("1000/0100/0010/0001"), std::string::npos);
    r = run("encode --q 3 --n 4 1000/0100/0010/0001");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "14408200\n");
    EXPECT_EQ(run("decode --q 2 --n 4 65536").code, 1);
}

TEST(Cli, AtlasCommands) {
    auto r = run("atlas selfcheck");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    r = run("atlas list");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("GTF81"), std::string::npos);
    const auto dir = std::filesystem::temp_directory_path() / "semirank_cli_export";
    std::filesystem::create_directories(dir);
    r = run("atlas export F16 --out " + dir.string());
    EXPECT_EQ(r.code, 0);
    std::ifstream in(dir / "F16.spread");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("33825"), std::string::npos);
    std::filesystem::remove_all(dir);
    r = run("atlas selfcheck --json");
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["all_passed"].get<bool>());
    EXPECT_EQ(run("atlas export NOPE --out /tmp").code, 2);
}

TEST(Cli, VerifyFiles) {
    const auto s = temp_file("semirank_cli_f81.spread", "3 4\n14408200\n15058227\n16660575\n21463326\n");
    const auto d = temp_file("semirank_cli_f81.decomp",
                             "3 4 9\n363259\n5560\n38502864\n538084\n12328135\n21785760\n59787\n1614006\n221187\n");
    const auto bad = temp_file("semirank_cli_f81_bad.decomp",
                               "3 4 8\n363259\n5560\n38502864\n538084\n12328135\n21785760\n59787\n1614006\n");
    EXPECT_EQ(run("verify --spreadset " + s.string() + " --decomp " + d.string()).code, 0);
    EXPECT_EQ(run("verify --spreadset " + s.string() + " --decomp " + bad.string()).code, 1);
    const auto junk = temp_file("semirank_cli_junk.spread", "2 4\nbanana\n");
    EXPECT_EQ(run("verify --spreadset " + junk.string()).code, 2);
    EXPECT_EQ(run("verify --spreadset /nonexistent/x.spread").code, 2);
    for (const auto& p : {s, d, bad, junk}) std::filesystem::remove(p);
}

TEST(Cli, RankOfFieldOfOrderSixteen) {
    const auto r = run("rank --atlas F16 --max 10");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 2), "9\n");
    EXPECT_EQ(run("rank --atlas F16 --max 8").code, 1);
}

TEST(Cli, Codes) {
    auto r = run("codes --g1-printed");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("[1,0,0,0,6,24,24,12,12,2]"), std::string::npos);
    r = run("codes --atlas F81");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("G1"), std::string::npos);
    EXPECT_NE(r.out.find("yes"), std::string::npos);
}

TEST(Cli, EquivalenceAndKnuth) {
    EXPECT_EQ(run("equiv --atlas F16 --atlas F16").code, 0);
    EXPECT_EQ(run("equiv --atlas F16 --atlas S1").code, 1);
    const auto r = run("knuth --atlas II");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 2), "6 ");
}

TEST(Cli, SearchAndDisprove) {
    auto r = run("search --q 2 --n 2 --max 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("spread set:"), std::string::npos);
    r = run("disprove --atlas F81 --max 8 --levels 1");
    EXPECT_NE(r.out.find("dim 5: 1600 spaces"), std::string::npos);
    EXPECT_EQ(run("disprove --spreadset /dev/null --max 3").code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("rank").code, 2);
    EXPECT_EQ(run("decode --q 4 --n 2 1").code, 2);
}
