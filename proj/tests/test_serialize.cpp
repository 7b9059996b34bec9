#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ran/core.hpp"
#include "ran/serialize.hpp"

using namespace ran;

namespace {

Trace parse(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

std::string dump_trace(const RanInstance& inst) {
  std::ostringstream out;
  write_trace(out, inst.graph.trace());
  return out.str();
}

}  // namespace

TEST_CASE("trace text round trip", "[serialize]") {
  const RanInstance inst = generate_ran(5, 1);
  const std::string text = dump_trace(inst);
  CHECK(text == "RAN-TRACE v1 n=5 seed=1\n0\n1\n");
  const Trace back = parse(text);
  CHECK(back.n == 5);
  CHECK(back.seed == 1);
  CHECK(back.entries == inst.graph.entries);
  const RanInstance replayed = replay(back);
  CHECK(replayed.graph.adj == inst.graph.adj);
}

TEST_CASE("trace round trip across sizes", "[serialize]") {
  for (u32 n : {3u, 4u, 64u, 999u}) {
    const RanInstance inst = generate_ran(n, 1234 + n);
    const Trace back = parse(dump_trace(inst));
    CHECK(back.entries == inst.graph.entries);
    CHECK(replay(back).graph.adj == inst.graph.adj);
  }
}

TEST_CASE("trace reader tolerates CR line endings and blank tail", "[serialize]") {
  const Trace t = parse("RAN-TRACE v1 n=5 seed=9\r\n0\r\n2\r\n\n");
  CHECK(t.n == 5);
  CHECK(t.seed == 9);
  CHECK(t.entries == std::vector<u32>({0, 2}));
}

TEST_CASE("trace reader reports line numbers on bad input", "[serialize]") {
  auto expect_line = [](const std::string& text, std::size_t line) {
    try {
      parse(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      INFO(e.what());
      CHECK(e.line == line);
    }
  };
  expect_line("BAD-MAGIC v1 n=5 seed=1\n0\n1\n", 1);
  expect_line("RAN-TRACE v2 n=5 seed=1\n0\n1\n", 1);
  expect_line("RAN-TRACE v1 n=x seed=1\n0\n1\n", 1);
  expect_line("RAN-TRACE v1 n=2 seed=1\n", 1);
  expect_line("RAN-TRACE v1 n=5 seed=1\n0\nzap\n", 3);
  expect_line("RAN-TRACE v1 n=5 seed=1\n0\n99\n", 3);   // face id out of range
  expect_line("RAN-TRACE v1 n=5 seed=1\n0\n", 3);        // truncated: flagged at EOF
  expect_line("RAN-TRACE v1 n=5 seed=1\n0\n1\n2\n", 4);  // too many entries
  expect_line("RAN-TRACE v1 n=5 seed=99999999999999999999999\n0\n1\n", 1);
}

TEST_CASE("replayed bad trace content fails with step context", "[serialize]") {
  // well-formed text whose content violates the growth rules
  const Trace t = parse("RAN-TRACE v1 n=5 seed=1\n0\n0\n");
  CHECK_THROWS_AS(replay(t), TraceError);
}

TEST_CASE("edge list export is sorted and complete", "[serialize]") {
  const RanInstance k2 = standard_subdivision(2);
  std::ostringstream out;
  write_edges(out, k2.graph);
  CHECK(out.str() ==
        "0 1\n0 2\n0 3\n0 5\n0 6\n1 2\n1 3\n1 4\n1 6\n2 3\n2 4\n2 5\n3 4\n3 5\n3 "
        "6\n");
}

TEST_CASE("json round trip preserves the instance", "[serialize]") {
  const RanInstance inst = generate_ran(77, 4242);
  std::stringstream buf;
  write_json(buf, inst);
  const RanInstance back = read_json(buf);
  CHECK(back.graph.n == inst.graph.n);
  CHECK(back.graph.seed == inst.graph.seed);
  CHECK(back.graph.adj == inst.graph.adj);
  REQUIRE(back.tree.size() == inst.tree.size());
  for (u32 id = 0; id < inst.tree.size(); ++id) {
    CHECK(back.tree[id].tri == inst.tree[id].tri);
    CHECK(back.tree[id].type == inst.tree[id].type);
  }
}

TEST_CASE("json reader rejects tampered payloads", "[serialize]") {
  const RanInstance inst = generate_ran(12, 5);
  std::ostringstream buf;
  write_json(buf, inst);
  const std::string good = buf.str();

  auto expect_reject = [](std::string text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_json(in), ParseError);
  };

  // edge list tampered: claims an edge the trace cannot produce
  {
    std::string bad = good;
    const auto pos = bad.find("\"edges\":[[0,1]");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 14, "\"edges\":[[0,9]");
    expect_reject(bad);
  }
  // truncated tree
  {
    std::string bad = good;
    const auto pos = bad.find("\"tree\":[");
    REQUIRE(pos != std::string::npos);
    const auto end = bad.find("}", pos);
    bad.replace(pos, end - pos + 2, "\"tree\":[");
    expect_reject(bad);
  }
  // not json at all
  expect_reject("RAN-TRACE v1 n=5 seed=1");
  // wrong format tag
  {
    std::string bad = good;
    const auto pos = bad.find("\"format\":\"ran-json\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 19, "\"format\":\"ran-nope\"");
    expect_reject(bad);
  }
  // face list tampered
  {
    std::string bad = good;
    const auto pos = bad.find("\"faces\":[[");
    REQUIRE(pos != std::string::npos);
    // swap the first face's first vertex for an impossible id
    const auto comma = bad.find(',', pos + 10);
    bad.replace(pos + 10, comma - (pos + 10), "99");
    expect_reject(bad);
  }
}

TEST_CASE("json writer emits the documented format tag", "[serialize]") {
  const RanInstance inst = generate_ran(6, 2);
  std::ostringstream buf;
  write_json(buf, inst);
  CHECK(buf.str().find("\"format\":\"ran-json\"") != std::string::npos);
  CHECK(buf.str().find("\"version\":1") != std::string::npos);
}
