#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "edis/backend.hpp"
#include "edis/fuzz.hpp"
#include "edis/parser.hpp"
#include "support/loopback.hpp"

using namespace edis;

namespace {

Program parse(std::string_view src) {
  auto p = parse_program(src);
  REQUIRE_MESSAGE(p.ok(), (p ? "" : p.error().message()));
  return std::move(*p);
}

CheckOk check(const Program& p, const TypeDict& initial = {}) {
  auto r = check_program(p, initial);
  REQUIRE_MESSAGE(r.ok(), (r ? "" : r.error().message()));
  return std::move(*r);
}

RunOutcome run_src(std::string_view src, Backend& b, const TypeDict& initial = {}) {
  const Program p = parse(src);
  return run_program(p, check(p, initial), b);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("queue program end to end on the simulator") {
  SimulatorBackend sim;
  auto r = run_src(slurp(std::string(EDIS_SOURCE_DIR) + "/programs/queue.edis"), sim);
  REQUIRE(r.ok());
  CHECK(display(*r) == "Just Message{body: \"hello\", id: 1}");
  CHECK(to_string(r->type) == "Maybe<Message>");
  // Two declares send nothing.
  CHECK(sim.commands_sent() == 5);
  auto snap = sim.store().snapshot();
  REQUIRE(snap.size() == 2);
}

TEST_CASE("ping and empty programs") {
  SimulatorBackend sim;
  auto r = run_src("program { ping }", sim);
  REQUIRE(r.ok());
  CHECK(display(*r) == "PONG");
  auto e = run_src("program { }", sim);
  REQUIRE(e.ok());
  CHECK(display(*e) == "()");
}

TEST_CASE("declare sends nothing") {
  SimulatorBackend sim;
  auto r = run_src("program { declare a : list<int> declare b : string<text> }", sim);
  REQUIRE(r.ok());
  CHECK(sim.commands_sent() == 0);
  CHECK(sim.store().size() == 0);
}

TEST_CASE("assumed keys absent from the store read as Nothing") {
  SimulatorBackend sim;
  TypeDict assumed{{"k", TypeTag::string_of(BaseType::text())}};
  auto r = run_src("program { get k }", sim, assumed);
  REQUIRE(r.ok());
  CHECK(display(*r) == "Nothing");
}

TEST_CASE("values flow through binders") {
  SimulatorBackend sim;
  auto r = run_src(
      "program { declare c : string<int> a <- incr c b <- incr c set d b get d }", sim);
  REQUIRE(r.ok());
  CHECK(display(*r) == "Just 2");
  auto f = run_src("program { declare x : string<float> v <- incrbyfloat x 0.25 "
                   "w <- incrbyfloat x v get x }",
                   sim);
  REQUIRE(f.ok());
  CHECK(display(*f) == "Just 0.5");
}

TEST_CASE("results of every shape") {
  SimulatorBackend sim;
  auto s = run_src("program { sadd x 3 sadd x 1 sadd y 1 sadd y 3 sadd y 4 sinter x y }", sim);
  REQUIRE(s.ok());
  CHECK(display(*s) == "[1, 3]");
  auto b = run_src("program { sadd z true }", sim);
  REQUIRE(b.ok());
  CHECK(display(*b) == "1");
  auto h = run_src("program { hset u name \"banacorn\" hget u name }", sim);
  REQUIRE(h.ok());
  CHECK(display(*h) == "Just \"banacorn\"");
  auto l = run_src("program { lpush q 1.5 lpush q 2.5 llen q }", sim);
  REQUIRE(l.ok());
  CHECK(display(*l) == "2");
}

TEST_CASE("error replies surface with the command's span") {
  SimulatorBackend sim;
  sim.store().exec({"SET", "k", "abc"});
  TypeDict assumed{{"k", TypeTag::string_of(BaseType::integer())}};
  const Program p = parse("program {\n  ping\n  incr k\n}");
  auto r = run_program(p, check(p, assumed), sim);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == RuntimeFailure::Kind::ErrorReply);
  CHECK(r.error().op == Opcode::Incr);
  CHECK(r.error().span.line == 3);
  CHECK(r.error().span.column == 3);
  CHECK(r.error().message == "ERR value is not an integer or out of range");
}

TEST_CASE("bytes that are not in the codec's image fail to decode") {
  SimulatorBackend sim;
  sim.store().exec({"SET", "k", "1e5"});
  sim.store().exec({"SET", "t", "\xff"});
  TypeDict assumed{{"k", TypeTag::string_of(BaseType::dbl())},
                   {"t", TypeTag::string_of(BaseType::text())}};
  auto r = run_src("program { get k }", sim, assumed);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error().kind == RuntimeFailure::Kind::Decode);
  CHECK(r.error().message.rfind("DECODE ", 0) == 0);
  auto t = run_src("program { get t }", sim, assumed);
  REQUIRE_FALSE(t.ok());
  CHECK(t.error().kind == RuntimeFailure::Kind::Decode);
}

TEST_CASE("wire commands") {
  const Program p = parse(
      "record P { x: float, y: float } program { declare k : list<P> "
      "lpush k P{1.0, -2.5} hset h f false }");
  CHECK_FALSE(to_wire(p.body[0], {}, p).has_value());
  CHECK(*to_wire(p.body[1], {}, p) == WireCommand{"LPUSH", "k", "{\"x\":1.0,\"y\":-2.5}"});
  CHECK(*to_wire(p.body[2], {}, p) == WireCommand{"HSET", "h", "f", "false"});
}

TEST_CASE("addresses") {
  auto a = parse_address("example.org:7000");
  REQUIRE(a);
  CHECK(a->host == "example.org");
  CHECK(a->port == 7000);
  CHECK(parse_address("localhost")->port == 6379);
  CHECK(parse_address(":6380")->host == "127.0.0.1");
  for (const char* bad : {"h:", "h:0", "h:65536", "h:12x", "h:-1"}) {
    INFO(bad);
    CHECK_FALSE(parse_address(bad).has_value());
  }
}

TEST_CASE("socket client against the loopback server") {
  loopback::Server server;
  auto conn = RespBackend::connect("127.0.0.1", server.port());
  CHECK(conn->send({"PING"}) == Reply::status("PONG"));
  auto r = run_src(slurp(std::string(EDIS_SOURCE_DIR) + "/programs/queue.edis"), *conn);
  REQUIRE(r.ok());
  CHECK(display(*r) == "Just Message{body: \"hello\", id: 1}");
  CHECK(server.requests() == 6);
}

TEST_CASE("simulator and socket client agree on generated programs") {
  loopback::Server server;
  std::mt19937_64 rng(7);
  FuzzConfig cfg;
  int compared = 0;
  for (int i = 0; i < 150; ++i) {
    const Program p = generate_program(rng, cfg);
    auto checked = check_program(p);
    if (!checked) continue;
    SimulatorBackend sim;
    auto conn = RespBackend::connect("127.0.0.1", server.port());
    // The server keeps one store per connection, so each program starts empty.
    const auto a = run_program(p, *checked, sim);
    const auto b = run_program(p, *checked, *conn);
    INFO(print_program(p));
    CHECK(a.ok() == b.ok());
    if (a.ok() && b.ok()) CHECK(*a == *b);
    if (!a.ok() && !b.ok()) CHECK(a.error() == b.error());
    ++compared;
  }
  CHECK(compared > 40);
}

TEST_CASE("connection failures") {
  int closed_port = 0;
  {
    loopback::Server s;
    closed_port = s.port();
  }
  CHECK_THROWS_AS(RespBackend::connect("127.0.0.1", closed_port), ConnectionError);
  CHECK_THROWS_AS(RespBackend::connect("no-such-host.invalid", 6379), ConnectionError);

  loopback::Server silent(loopback::Mode::Silent);
  auto c = RespBackend::connect("127.0.0.1", silent.port(), std::chrono::milliseconds(100));
  CHECK_THROWS_WITH_AS(c->send({"PING"}), "timed out waiting for reply", ConnectionError);

  loopback::Server garbage(loopback::Mode::Garbage);
  auto g = RespBackend::connect("127.0.0.1", garbage.port());
  CHECK_THROWS_AS(g->send({"PING"}), ConnectionError);
  CHECK_THROWS_WITH_AS(g->send({"PING"}), "connection is closed", ConnectionError);

  loopback::Server hangup(loopback::Mode::Hangup);
  auto h = RespBackend::connect("127.0.0.1", hangup.port());
  CHECK_THROWS_AS(h->send({"PING"}), ConnectionError);
}

TEST_CASE("live server, when EDIS_TEST_REDIS names one") {
  const char* addr = std::getenv("EDIS_TEST_REDIS");
  if (!addr) {
    MESSAGE("EDIS_TEST_REDIS not set; skipping");
    return;
  }
  auto a = parse_address(addr);
  REQUIRE(a);
  auto conn = RespBackend::connect(a->host, a->port);
  CHECK(conn->send({"PING"}) == Reply::status("PONG"));
  conn->send({"DEL", "counter", "queue"});
  auto r = run_src(slurp(std::string(EDIS_SOURCE_DIR) + "/programs/queue.edis"), *conn);
  REQUIRE(r.ok());
  CHECK(display(*r) == "Just Message{body: \"hello\", id: 1}");
  conn->send({"DEL", "counter", "queue"});
}
