#include "cachemodel/cache_sim.hpp"
#include "cachemodel/error.hpp"
#include "cachemodel/trace_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace cachemodel;

namespace {

std::vector<TraceRecord> random_records(testsupport::Rng& r, std::size_t n, std::uint32_t max_core) {
    std::vector<TraceRecord> v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back({static_cast<AccessKind>(r.u(0, 2)), r.u(0, ~0ULL),
                     static_cast<std::uint32_t>(r.u(0, max_core))});
    }
    return v;
}

std::string to_binary(const std::vector<TraceRecord>& v) {
    std::ostringstream out(std::ios::binary);
    write_binary_trace(out, v);
    return out.str();
}

std::vector<TraceRecord> from_binary(const std::string& bytes, bool strict = true) {
    std::istringstream in(bytes, std::ios::binary);
    return parse_binary_trace(in, strict);
}

template <typename F>
ParseError expect_parse_error(F&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected ParseError");
    return ParseError(0, "", "");
}

} // namespace

TEST_CASE("text grammar") {
    const auto v = parse_text_trace(std::string_view("I 0x400100\nW 0x7fff0040 2\n"));
    REQUIRE(v.size() == 2);
    CHECK(v[0] == TraceRecord{AccessKind::IFetch, 0x400100, 0});
    CHECK(v[1] == TraceRecord{AccessKind::Write, 0x7fff0040, 2});

    const auto w = parse_text_trace(std::string_view(
        "# header comment\n\n  R ff   # trailing comment\r\nW 0XAbC 1\n\t\nI 0x0\n"));
    REQUIRE(w.size() == 3);
    CHECK(w[0] == TraceRecord{AccessKind::Read, 0xff, 0});
    CHECK(w[1] == TraceRecord{AccessKind::Write, 0xabc, 1});
    CHECK(w[2] == TraceRecord{AccessKind::IFetch, 0, 0});
    CHECK(parse_text_trace(std::string_view("")).empty());
}

TEST_CASE("text parse errors carry line number and token") {
    ParseError e = expect_parse_error([] { parse_text_trace(std::string_view("X 0x10\n")); });
    CHECK(e.position() == 1);
    CHECK(e.token() == "X");
    CHECK(std::string(e.what()).find("unknown kind 'X'") != std::string::npos);

    e = expect_parse_error([] { parse_text_trace(std::string_view("R 0x10\n\nR 0xZZ\n")); });
    CHECK(e.position() == 3);
    CHECK(e.token() == "0xZZ");

    e = expect_parse_error([] { parse_text_trace(std::string_view("R 0x10 one\n")); });
    CHECK(e.token() == "one");
    e = expect_parse_error([] { parse_text_trace(std::string_view("R\n")); });
    CHECK(e.position() == 1);
    e = expect_parse_error([] { parse_text_trace(std::string_view("R 0x1 0 9\n")); });
    e = expect_parse_error([] { parse_text_trace(std::string_view("R 0x11112222333344445\n")); });
    CHECK(e.kind() == "parse");
}

TEST_CASE("text header directive") {
    std::istringstream in("#!ctrace version=1 records=2 cores=3\nR 0x0\nW 0x40 2\n");
    TextTraceReader reader(in);
    int n = 0;
    while (reader.next()) {
        ++n;
    }
    CHECK(n == 2);
    CHECK(reader.has_header());
    CHECK(reader.header().record_count == 2u);
    CHECK(reader.header().core_count == 3u);

    expect_parse_error([] { parse_text_trace(std::string_view("#!ctrace version=1 records=3\nR 0x0\n")); });
    expect_parse_error([] { parse_text_trace(std::string_view("#!ctrace version=2\n")); });
    expect_parse_error([] { parse_text_trace(std::string_view("R 0x0\n#!ctrace version=1\n")); });
    expect_parse_error([] { parse_text_trace(std::string_view("#!ctrace records=0\n")); });
}

TEST_CASE("binary format layout") {
    const std::vector<TraceRecord> v = {{AccessKind::Write, 0x0102030405060708ULL, 7}};
    const std::string bytes = to_binary(v);
    REQUIRE(bytes.size() == 8 + 16);
    CHECK(bytes.substr(0, 8) == std::string("CTRC\0\1\0\0", 8));
    CHECK(bytes[8] == 2);
    CHECK(bytes[9] == 7);
    for (int i = 10; i < 16; ++i) {
        CHECK(bytes[static_cast<std::size_t>(i)] == 0);
    }
    CHECK(static_cast<unsigned char>(bytes[16]) == 0x08);
    CHECK(static_cast<unsigned char>(bytes[23]) == 0x01);
    CHECK(from_binary(bytes) == v);
    CHECK(from_binary(std::string("CTRC\0\1\0\0", 8)).empty());
}

TEST_CASE("binary errors") {
    ParseError e = expect_parse_error([] { from_binary("CTRX\0\1\0\0"); });
    CHECK(e.position() == 0);

    const std::vector<TraceRecord> v = {{AccessKind::Read, 1, 0}, {AccessKind::Read, 2, 0}};
    std::string bytes = to_binary(v);
    bytes.resize(bytes.size() - 5);
    e = expect_parse_error([&] { from_binary(bytes); });
    CHECK(e.position() == 24);
    CHECK(std::string(e.what()).find("byte offset 24") != std::string::npos);

    std::string reserved = to_binary(v);
    reserved[8 + 3] = 1;
    expect_parse_error([&] { from_binary(reserved, true); });
    CHECK(from_binary(reserved, false) == v);

    std::string kind = to_binary(v);
    kind[8] = 9;
    expect_parse_error([&] { from_binary(kind, false); });

    const std::vector<TraceRecord> wide = {{AccessKind::Read, 0, 300}};
    std::ostringstream out;
    CHECK_THROWS_AS(write_binary_trace(out, wide), TraceError);
}

TEST_CASE("round trips on random record sets") {
    testsupport::Rng r(31337);
    for (int i = 0; i < 200; ++i) {
        const auto v = random_records(r, r.u(0, 300), 255);
        const std::string bytes = to_binary(v);
        CHECK(from_binary(bytes) == v);
        CHECK(to_binary(from_binary(bytes)) == bytes);

        std::ostringstream text;
        std::optional<TraceFileHeader> header;
        if (r.coin()) {
            header = TraceFileHeader{1, v.size(), 256};
        }
        write_text_trace(text, v, header);
        CHECK(parse_text_trace(std::string_view(text.str())) == v);
    }
}

TEST_CASE("file helpers pick the format") {
    const auto dir = std::filesystem::temp_directory_path() / "cachemodel_trace_io_test";
    std::filesystem::create_directories(dir);
    testsupport::Rng r(1);
    const auto v = random_records(r, 50, 3);
    write_trace_file(dir / "t.ctrc", v);
    write_trace_file(dir / "t.trc", v);
    CHECK(read_trace_file(dir / "t.ctrc") == v);
    CHECK(read_trace_file(dir / "t.trc") == v);
    CHECK(std::filesystem::file_size(dir / "t.ctrc") == 8 + 16 * 50);
    CHECK_THROWS_AS(read_trace_file(dir / "missing.trc"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("streaming readers yield records one at a time") {
    std::ostringstream big;
    for (int i = 0; i < 10000; ++i) {
        big << "R 0x" << std::hex << i * 64 << "\n";
    }
    std::istringstream in(big.str());
    TextTraceReader reader(in);
    std::uint64_t n = 0;
    std::uint64_t last = 0;
    while (auto rec = reader.next()) {
        last = rec->address;
        ++n;
    }
    CHECK(n == 10000);
    CHECK(last == 9999 * 64);
}

TEST_CASE("synthetic patterns") {
    SyntheticSpec s;
    s.length = 4;
    s.ifetch_per_data = 0;
    s.write_every = 0;
    auto t = generate_synthetic(s);
    REQUIRE(t.size() == 4);
    CHECK(t[0].address == 0x0);
    CHECK(t[1].address == 0x40);
    CHECK(t[2].address == 0x80);
    CHECK(t[3].address == 0xC0);

    s.pattern = StridedPattern{3};
    t = generate_synthetic(s);
    CHECK(t[1].address == 3 * 64);

    SyntheticSpec d;
    d.length = 8;
    t = generate_synthetic(d);
    REQUIRE(t.size() == 32);
    CHECK(t[0] == TraceRecord{AccessKind::IFetch, 0x400000, 0});
    CHECK(t[1].address == 0x400004);
    CHECK(t[3].kind == AccessKind::Read);
    CHECK(t[15].kind == AccessKind::Write); // 4th data record
    CHECK(t[31].kind == AccessKind::Write);

    SyntheticSpec m;
    m.length = 2;
    m.core_count = 2;
    m.ifetch_per_data = 0;
    t = generate_synthetic(m);
    REQUIRE(t.size() == 4);
    CHECK(t[1].core == 1);
    CHECK(t[1].address == 0x10000000);
}

TEST_CASE("random pattern is deterministic per seed") {
    SyntheticSpec s;
    s.length = 500;
    s.core_count = 2;
    s.pattern = RandomPattern{42};
    const auto a = generate_synthetic(s);
    const auto b = generate_synthetic(s);
    CHECK(a == b);
    s.pattern = RandomPattern{43};
    CHECK(generate_synthetic(s) != a);
    for (const TraceRecord& r : a) {
        if (r.kind != AccessKind::IFetch) {
            const std::uint64_t off = r.address - r.core * 0x10000000ULL;
            CHECK(off % 64 == 0);
            CHECK(off / 64 < 4096);
        }
    }
}

TEST_CASE("loop(2,3) on a 2-line L1D misses twice") {
    SyntheticSpec s;
    s.pattern = LoopPattern{2, 3};
    s.length = 12345; // ignored by loop
    auto t = generate_synthetic(s);
    CHECK(t.size() == 6 * 4);
    HierarchyConfig h;
    h.l1d = {128, 64, 1, WritePolicy::WriteBackAllocate};
    const SimResult r = simulate(t, h, {});
    CHECK(r.aggregate.dc_read_misses + r.aggregate.dc_write_misses == 2);
    CHECK(r.aggregate.dc_reads + r.aggregate.dc_writes == 6);
}

TEST_CASE("pattern parsing") {
    CHECK(std::holds_alternative<SequentialPattern>(parse_pattern("sequential")));
    CHECK(std::get<StridedPattern>(parse_pattern("strided:8")).stride_lines == 8);
    CHECK(std::get<RandomPattern>(parse_pattern("random", 17)).seed == 17);
    CHECK(std::get<RandomPattern>(parse_pattern("random:5", 17)).seed == 5);
    const LoopPattern l = std::get<LoopPattern>(parse_pattern("loop:8:4"));
    CHECK(l.size_lines == 8);
    CHECK(l.iterations == 4);
    CHECK(to_string(parse_pattern("loop:8:4")) == "loop:8:4");
    CHECK(to_string(parse_pattern("strided:2")) == "strided:2");
    CHECK_THROWS_AS(parse_pattern("strided:0"), UsageError);
    CHECK_THROWS_AS(parse_pattern("strided:x"), UsageError);
    CHECK_THROWS_AS(parse_pattern("loop:0:3"), UsageError);
    CHECK_THROWS_AS(parse_pattern("zigzag"), UsageError);
}
