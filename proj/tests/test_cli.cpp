#include <gtest/gtest.h>

#include <chrono>
#include <csignal>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <netinet/in.h>
#include <unistd.h>

#include "support.hpp"

using namespace dissect;
using testing_support::fixtures;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

struct Scratch {
    fs::path dir = fs::temp_directory_path() / ("dissect-cli-" + std::to_string(::getpid()));
    Scratch() { fs::create_directories(dir); }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

fs::path scratch() {
    static const Scratch s;
    return s.dir;
}

Run run(const std::string& args) {
    static int n = 0;
    const auto out = scratch() / ("out" + std::to_string(n));
    const auto err = scratch() / ("err" + std::to_string(n++));
    const std::string cmd = std::string("'") + DISSECT_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out.string());
    r.err = read_file(err.string());
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

int free_port() {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in a{};
    a.sin_family = AF_INET;
    a.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    a.sin_port = 0;
    ::bind(fd, reinterpret_cast<sockaddr*>(&a), sizeof a);
    socklen_t len = sizeof a;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&a), &len);
    ::close(fd);
    return ntohs(a.sin_port);
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("run").code, 2);
    EXPECT_EQ(run("one").code, 2);
    EXPECT_EQ(run("one --buggy x").code, 2);
    EXPECT_EQ(run("run /nonexistent/manifest.json").code, 2);
    EXPECT_EQ(run("stats /nonexistent/records.json").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, RunWritesRecordsAndReports) {
    const auto out = scratch() / "records.json";
    const auto reports = scratch() / "reports";
    auto r = run("run " + q(fixtures() / "manifest.json") + " --out " + q(out) + " --reports " + q(reports));
    ASSERT_EQ(r.code, 0) << r.err;
    auto rs = load_reference_json(out.string());
    EXPECT_EQ(rs.records.size(), 39u);
    EXPECT_TRUE(rs.errors.empty());
    for (const char* f : {"aggregates.json", "table.csv", "venn.csv", "actions.csv", "patterns.csv", "per-patch-counts.csv",
                          "composition.csv"})
        EXPECT_TRUE(fs::exists(reports / f)) << f;
    const auto venn = read_file((reports / "venn.csv").string());
    EXPECT_EQ(venn.substr(0, 15), "region,patches\n");
}

TEST(Cli, RunToStdoutMatchesFile) {
    const auto out = scratch() / "again.json";
    auto a = run("run " + q(fixtures() / "manifest.json") + " --jobs 1");
    auto b = run("run " + q(fixtures() / "manifest.json") + " --jobs 4 --out " + q(out));
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(a.out, read_file(out.string()));
}

TEST(Cli, EntryErrorsExitOne) {
    const auto m = scratch() / "bad-manifest.json";
    std::ofstream(m) << Json::array({Json{{"id", "Closure-40"}, {"diff", (fixtures() / "patches/closure-40.diff").string()}},
                                     Json{{"id", "Gone-1"}, {"diff", "/nonexistent.diff"}}})
                            .dump();
    auto r = run("run " + q(m));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("Gone-1"), std::string::npos);
    auto doc = Json::parse(r.out);
    EXPECT_EQ(doc["records"].size(), 1u);
    EXPECT_EQ(doc["errors"][0]["id"], "Gone-1");
}

TEST(Cli, OnePrintsARecord) {
    auto r = run("one --id Closure-40 --diff " + q(fixtures() / "patches/closure-40.diff"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto rec = record_from_json(Json::parse(r.out));
    EXPECT_EQ(rec.id(), "Closure-40");
    EXPECT_EQ(rec.metrics.patch_size, 3);

    auto t = run("one --summary --id Closure-40 --diff " + q(fixtures() / "patches/closure-40.diff") + " --buggy " +
                 q(fixtures() / "trees/closure-40/buggy") + " --fixed " + q(fixtures() / "trees/closure-40/fixed"));
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_NE(t.out.find("chunks 2, spreading 2, files 1, classes 1, methods 1"), std::string::npos) << t.out;
    EXPECT_NE(t.out.find("mcM"), std::string::npos);

    auto e = run("one --diff " + q(scratch() / "missing.diff"));
    EXPECT_EQ(e.code, 1);
}

TEST(Cli, StatsOverRecords) {
    const auto out = scratch() / "stats-records.json";
    ASSERT_EQ(run("run " + q(fixtures() / "manifest.json") + " --out " + q(out)).code, 0);
    auto all = run("stats " + q(out));
    ASSERT_EQ(all.code, 0) << all.err;
    for (const char* s : {"# percentiles", "# change profile", "# repair actions", "# repair patterns", "# per patch"})
        EXPECT_NE(all.out.find(s), std::string::npos) << s;
    auto venn = run("stats --venn " + q(out));
    EXPECT_EQ(venn.out.find("# percentiles"), std::string::npos);
    EXPECT_NE(venn.out.find("# change profile"), std::string::npos);
    auto js = run("stats --json " + q(out));
    ASSERT_EQ(js.code, 0);
    EXPECT_EQ(Json::parse(js.out)["patches"], 39);
    const auto csv = scratch() / "csv";
    EXPECT_EQ(run("stats --csv " + q(csv) + " " + q(out)).code, 0);
    EXPECT_TRUE(fs::exists(csv / "table.csv"));
}

TEST(Cli, StatsReadsPublishedShape) {
    const auto p = scratch() / "published.json";
    std::ofstream(p) << R"([{"bugId": 1, "project": "Chart", "metrics": {"linesMod": 1, "chunks": 1, "files": 1},
                             "repairActions": ["condExpMod"], "repairPatterns": ["expLogicMod", "singleLine"]}])";
    auto r = run("stats --rank-actions " + q(p));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("cndM"), std::string::npos);
}

TEST(Cli, ServeAnswersRecordsJson) {
    const auto out = scratch() / "serve-records.json";
    ASSERT_EQ(run("run " + q(fixtures() / "manifest.json") + " --out " + q(out)).code, 0);
    const int port = free_port();
    const pid_t pid = ::fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
        const auto port_s = std::to_string(port);
        const auto path_s = out.string();
        if (!std::freopen("/dev/null", "w", stderr)) std::_Exit(126);
        ::execl(DISSECT_CLI, DISSECT_CLI, "serve", path_s.c_str(), "--port", port_s.c_str(), static_cast<char*>(nullptr));
        std::_Exit(127);
    }
    httplib::Client cli("127.0.0.1", port);
    httplib::Result res;
    for (int i = 0; i < 100 && !res; ++i) {
        res = cli.Get("/records.json");
        if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
    const auto served = records_from_json(Json::parse(res->body));
    EXPECT_EQ(served.records.size(), 39u);
    EXPECT_EQ(res->body, read_file(out.string()));  // the file already is in our schema
    auto api = cli.Get("/api/records");
    ASSERT_TRUE(api);
    EXPECT_EQ(api->body, res->body);
    auto index = cli.Get("/");
    ASSERT_TRUE(index);
    EXPECT_NE(index->body.find("/records.json"), std::string::npos);
    EXPECT_EQ(cli.Get("/nope")->status, 404);
    ::kill(pid, SIGTERM);
    int status = 0;
    ::waitpid(pid, &status, 0);
}
