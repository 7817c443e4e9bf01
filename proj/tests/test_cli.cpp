#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

namespace {

struct Outcome {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Outcome edis(const std::string& args) {
  const std::string cmd = std::string(EDIS_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* f = ::popen(cmd.c_str(), "r");
  REQUIRE(f);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) o.out.append(buf, n);
  const int status = ::pclose(f);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("edis-cli-" + name);
  std::ofstream(path) << content;
  return path.string();
}

const std::string kPrograms = std::string(EDIS_SOURCE_DIR) + "/programs/";

}  // namespace

TEST_CASE("check") {
  auto ok = edis("check " + kPrograms + "queue.edis");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("queue : list<Message>") != std::string::npos);
  CHECK(ok.out.find("result: Maybe<Message>") != std::string::npos);

  auto bad = edis("check " + kPrograms + "set_then_sadd.edis");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("set_then_sadd.edis:4:3: sadd: SetOrNX-violated") != std::string::npos);

  auto js = edis("check --json " + kPrograms + "set_then_sadd.edis");
  CHECK(js.code == 1);
  CHECK(js.out.rfind("{\"status\":\"error\",\"line\":4,\"col\":3,", 0) == 0);
}

TEST_CASE("strict mode") {
  const auto f = temp_file("repush.edis", "program { lpush q 1 lpush q true }");
  CHECK(edis("check " + f).code == 0);
  CHECK(edis("check --strict " + f).code == 1);
}

TEST_CASE("run") {
  auto r = edis("run " + kPrograms + "queue.edis");
  CHECK(r.code == 0);
  CHECK(r.out == "Just Message{body: \"hello\", id: 1}\n");

  auto d = edis("run --dump-store " + kPrograms + "queue.edis");
  CHECK(d.out.find("\"key\":\"queue\"") != std::string::npos);

  const auto over = temp_file("over.edis", "program {\n  set a 9223372036854775807\n  incr a\n}");
  auto o = edis("run " + over);
  CHECK(o.code == 4);
  CHECK(o.out.find(":3:3: runtime error: incr:") != std::string::npos);
  CHECK(edis("run --json " + over).out.rfind("{\"status\":\"runtime_error\"", 0) == 0);

  // The checker stops ill-typed programs before anything is sent.
  CHECK(edis("run " + kPrograms + "set_then_sadd.edis").code == 1);
}

TEST_CASE("assumptions") {
  const auto report = temp_file("assume.json", edis("check --json " + kPrograms + "queue.edis").out);
  const auto next = temp_file(
      "next.edis", "record Message { body: text, id: int } program { rpop queue incr counter }");
  CHECK(edis("check --assume " + report + " " + next).code == 0);
  CHECK(edis("check " + next).code == 1);  // queue is unknown without it
  const auto clash = temp_file("clash.edis", "program { sadd counter 1 }");
  CHECK(edis("check --assume " + report + " " + clash).code == 1);
  CHECK(edis("check " + clash).code == 0);
  CHECK(edis("check --assume " + temp_file("junk.json", "{}") + " " + next).code == 3);
}

TEST_CASE("exit codes for bad input") {
  CHECK(edis("check " + temp_file("syntax.edis", "program { set }")).code == 2);
  CHECK(edis("check /nonexistent/file.edis").code == 3);
  CHECK(edis("").code == 2);
  CHECK(edis("check").code == 2);
  CHECK(edis("run --backend nope " + kPrograms + "queue.edis").code == 2);
}

TEST_CASE("connection errors") {
  CHECK(edis("run --backend resp --addr 127.0.0.1:1 " + kPrograms + "queue.edis").code == 5);
  CHECK(edis("run --backend resp --addr host:0 " + kPrograms + "queue.edis").code == 5);
}

TEST_CASE("fuzz") {
  auto f = edis("fuzz --iterations 200 --seed 1");
  CHECK(f.code == 0);
  CHECK(f.out.find("runtime-WRONGTYPE: 0") != std::string::npos);
  CHECK(f.out.find("seed: 1") != std::string::npos);
  CHECK(edis("fuzz --iterations 200 --seed 1").out == f.out);
}
