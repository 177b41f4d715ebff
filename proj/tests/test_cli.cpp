#include "cli.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "cachemodel");
    std::vector<const char*> argv;
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cachemodel::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json error_of(const Result& r) {
    return json::parse(r.err.substr(r.err.rfind("{\"error\"")));
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "cachemodel_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

} // namespace

TEST_CASE("usage errors exit 2") {
    Result r = invoke({});
    CHECK(r.code == 2);
    r = invoke({"run", "--preset", "xeon-foster"});
    CHECK(r.code == 2);
    CHECK(error_of(r)["error"]["kind"] == "usage");
    r = invoke({"bogus"});
    CHECK(r.code == 2);
}

TEST_CASE("unknown preset names the preset") {
    TempDir dir;
    write_file(dir / "t.trc", "R 0x0\n");
    const Result r = invoke({"run", "--trace", dir / "t.trc", "--preset", "nonesuch"});
    CHECK(r.code == 2);
    const json e = error_of(r);
    CHECK(e["error"]["kind"] == "config");
    CHECK(e["error"]["message"].get<std::string>().find("nonesuch") != std::string::npos);
}

TEST_CASE("presets list and dump") {
    Result r = invoke({"presets", "list"});
    CHECK(r.code == 0);
    CHECK(r.out.find("xeon-foster") != std::string::npos);
    CHECK(r.out.find("cacti-default") != std::string::npos);
    r = invoke({"presets", "dump", "xeon-foster"});
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.contains("l1d"));
    r = invoke({"presets", "dump", "zzz"});
    CHECK(r.code == 2);
}

TEST_CASE("trace gen then run in both formats") {
    TempDir dir;
    Result r = invoke({"trace", "gen", "--pattern", "random:7", "--len", "100", "--out", dir / "t.ctrc"});
    REQUIRE(r.code == 0);
    CHECK(fs::file_size(dir / "t.ctrc") == 8 + 16 * 400);

    r = invoke({"run", "--trace", dir / "t.ctrc", "--preset", "xeon-foster", "--id", "cfg"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["config_id"] == "cfg");
    CHECK(j["counts"]["dc_reads"].get<double>() + j["counts"]["dc_writes"].get<double>() == 100);

    r = invoke({"run", "--trace", dir / "t.ctrc", "--preset", "xeon-foster", "--format", "csv",
                "--out", dir / "r.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(testsupport::slurp(dir / "r.csv").starts_with("section,term,value,unit\n"));

    const std::string params = dir / "p.json";
    write_file(params, invoke({"presets", "dump", "xeon-foster"}).out);
    r = invoke({"run", "--trace", dir / "t.ctrc", "--params", params, "--id", "cfg"});
    CHECK(r.code == 0);
}

TEST_CASE("bad trace exits 1 with a parse error") {
    TempDir dir;
    write_file(dir / "bad.trc", "R 0x0\nQ 0x40\n");
    const Result r = invoke({"run", "--trace", dir / "bad.trc", "--preset", "xeon-foster"});
    CHECK(r.code == 1);
    const json e = error_of(r);
    CHECK(e["error"]["kind"] == "parse");
    CHECK(e["error"]["position"] == 2);
    CHECK(e["error"]["token"] == "Q");
}

TEST_CASE("invalid parameter file exits 2 and names the field") {
    TempDir dir;
    write_file(dir / "t.trc", "R 0x0\n");
    json p = json::parse(invoke({"presets", "dump", "xeon-foster"}).out);
    p["l1i"]["read_energy_nj"] = -1.0;
    write_file(dir / "p.json", p.dump());
    Result r = invoke({"run", "--trace", dir / "t.trc", "--params", dir / "p.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("l1i.read_energy_nj") != std::string::npos);

    write_file(dir / "broken.json", "{ not json");
    r = invoke({"run", "--trace", dir / "t.trc", "--params", dir / "broken.json"});
    CHECK(r.code == 2);
}

TEST_CASE("sweep and compare from the command line") {
    TempDir dir;
    const json spec = {{"schema_version", 1},
                       {"params", "preset:xeon-foster"},
                       {"trace", {{"pattern", "strided:2"}, {"length", 200}}},
                       {"axes", {{{"path", "l1d.size_kb"}, {"values", {4, 8}}}}}};
    write_file(dir / "s.json", spec.dump());
    Result r = invoke({"sweep", "--spec", dir / "s.json", "--jobs", "2", "--out", dir / "s.csv"});
    REQUIRE(r.code == 0);
    const std::string csv = testsupport::slurp(dir / "s.csv");
    CHECK(csv.starts_with("config_id,l1d.size_kb,"));

    r = invoke({"compare", "--pred", dir / "s.csv", "--ref", dir / "s.csv", "--metric", "energy_sum_j"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("energy_sum_j") != std::string::npos);
    r = invoke({"compare", "--pred", dir / "s.csv", "--ref", dir / "s.csv", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).is_object());

    r = invoke({"compare", "--pred", dir / "missing.csv", "--ref", dir / "s.csv"});
    CHECK(r.code == 2);
}
