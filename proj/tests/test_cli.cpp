#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "sirup/report.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(SIRUP_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fx(const std::string& name) { return oracle::fixture(name); }

sirup::Json json_of(const Run& r) { return sirup::Json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "sirup_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("cli: classify q4") {
    auto r = cli("classify " + fx("q4.cq") + " --json");
    REQUIRE(r.code == 0);
    auto j = json_of(r);
    CHECK(j["command"] == "classify");
    CHECK(j["verdict"]["exact"] == "L-complete");
    CHECK(j["inputs"]["query"]["bytes"].get<int>() > 0);
    CHECK(j["caps_hit"].is_object());
}

TEST_CASE("cli: evaluate q2 over D2") {
    auto r = cli("evaluate " + fx("q2.cq") + " --data " + fx("d2.data") + " --json");
    REQUIRE(r.code == 0);
    CHECK(json_of(r)["verdict"]["answer"] == true);
    auto pi = cli("evaluate " + fx("q2.cq") + " --data " + fx("d2.data") + " --program pi --json");
    REQUIRE(pi.code == 0);
    CHECK(json_of(pi)["verdict"]["answer"] == true);
}

TEST_CASE("cli: validate an empty file") {
    auto empty = scratch("empty.cq");
    std::ofstream(empty).close();
    auto r = cli("validate " + empty.string() + " --json");
    CHECK(r.code == 0);
    CHECK(json_of(r)["verdict"]["shape"].is_null());
}

TEST_CASE("cli: input errors exit 1") {
    CHECK(cli("classify /nonexistent/q.cq").code == 1);
    CHECK(cli("classify " + fx("q4.cq") + " --no-such-flag").code == 1);
    CHECK(cli("frobnicate").code == 1);
    auto bad = scratch("bad.cq");
    std::ofstream(bad) << "R(x,.";
    CHECK(cli("validate " + bad.string()).code == 1);
    CHECK(cli("evaluate " + fx("q2.cq")).code == 1);
}

TEST_CASE("cli: caps exit 2") {
    CHECK(cli("bounded " + fx("q4.cq") + " --max-span 0").code == 2);
    CHECK(cli("evaluate " + fx("q2.cq") + " --data " + fx("d2.data") + " --max-a-nodes 1").code == 2);
}

TEST_CASE("cli: reports are deterministic apart from timing") {
    for (const std::string args : {"classify " + fx("q6.cq"), "bounded " + fx("q8.cq"), "cactus " + fx("q5.cq") + " --depth 2",
                                   "reduce " + fx("q4.cq") + " --kind undirected --seed 3"}) {
        auto a = json_of(cli(args + " --json"));
        auto b = json_of(cli(args + " --json"));
        a.erase("timing");
        b.erase("timing");
        CHECK_MESSAGE(a.dump() == b.dump(), args);
    }
}

TEST_CASE("cli: rewrite writes one file per disjunct") {
    auto dir = scratch("rewrite_q8");
    std::filesystem::remove_all(dir);
    auto r = cli("rewrite " + fx("q8.cq") + " --depth 2 --out " + dir.string());
    REQUIRE(r.code == 0);
    int files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        ++files;
        CHECK_NOTHROW(sirup::parse_file(e.path().string()));
    }
    CHECK(files == 3);
}

TEST_CASE("cli: gadget compiles to a parseable query") {
    auto src = scratch("not.gadget");
    std::ofstream(src) << "gadget AA\nformula not(y1)\n";
    auto out = scratch("not.cq");
    REQUIRE(cli("gadget " + src.string() + " --out " + out.string()).code == 0);
    auto q = sirup::parse_file(out.string());
    CHECK(sirup::shape(q).is_dag);
    auto v = cli("gadget verify " + src.string() + " --depth 2 --json");
    REQUIRE(v.code == 0);
    CHECK(json_of(v)["verdict"]["ok"] == true);
}
