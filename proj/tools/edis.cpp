#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "edis/backend.hpp"
#include "edis/checker.hpp"
#include "edis/fuzz.hpp"
#include "edis/parser.hpp"
#include "edis/report.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kTypeError = 1,
  kParseError = 2,
  kIoError = 3,
  kRuntimeError = 4,
  kConnectionError = 5,
  kSoundnessViolation = 6,
};

std::optional<std::string> slurp(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

struct Loaded {
  edis::Program program;
  edis::TypeDict assumed;
};

// Reads, parses and loads the assumption file; on failure returns the exit
// code after reporting.
std::variant<Loaded, int> load(const std::string& path, const std::string& assume_path,
                               bool json) {
  auto source = slurp(path);
  if (!source) {
    std::cerr << "edis: cannot read '" << path << "'\n";
    return kIoError;
  }
  auto parsed = edis::parse_program(*source);
  if (!parsed) {
    if (json)
      std::cout << edis::parse_error_json(parsed.error()) << "\n";
    else
      std::cerr << path << ":" << parsed.error().message() << "\n";
    return kParseError;
  }
  Loaded out{std::move(*parsed), {}};
  if (!assume_path.empty()) {
    auto text = slurp(assume_path);
    if (!text) {
      std::cerr << "edis: cannot read '" << assume_path << "'\n";
      return kIoError;
    }
    auto dict = edis::parse_assumption(*text);
    if (!dict) {
      std::cerr << assume_path << ": " << dict.error() << "\n";
      return kIoError;
    }
    out.assumed = std::move(*dict);
  }
  return out;
}

void print_type_error(const std::string& path, const edis::TypeError& e) {
  std::cerr << path << ":" << e.message() << "\n";
}

struct CheckFlags {
  std::string file;
  std::string assume;
  bool json = false;
  bool strict = false;
};

int cmd_check(const CheckFlags& f) {
  auto loaded = load(f.file, f.assume, f.json);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  auto& [program, assumed] = std::get<Loaded>(loaded);
  auto report = edis::check_program(program, assumed, edis::CheckOptions{f.strict});
  if (f.json) {
    std::cout << edis::check_report_json(report) << "\n";
    return report ? kOk : kTypeError;
  }
  if (!report) {
    print_type_error(f.file, report.error());
    return kTypeError;
  }
  std::cout << "ok\nfinal dictionary:\n";
  for (const auto& e : report->final_dict)
    std::cout << "  " << e.key << " : " << edis::to_string(e.tag) << "\n";
  std::cout << "result: " << edis::to_string(report->result) << "\n";
  return kOk;
}

struct RunFlags {
  std::string file;
  std::string assume;
  std::string backend = "mem";
  std::string addr;
  int timeout_ms = 5000;
  bool strict = false;
  bool dump_store = false;
  bool flushdb = false;
  bool json = false;
};

int cmd_run(const RunFlags& f) {
  auto loaded = load(f.file, f.assume, f.json);
  if (auto* code = std::get_if<int>(&loaded)) return *code;
  auto& [program, assumed] = std::get<Loaded>(loaded);
  auto report = edis::check_program(program, assumed, edis::CheckOptions{f.strict});
  if (!report) {
    if (f.json) std::cout << edis::check_report_json(report) << "\n";
    else print_type_error(f.file, report.error());
    return kTypeError;
  }

  std::unique_ptr<edis::Backend> backend;
  edis::SimulatorBackend* sim = nullptr;
  try {
    if (f.backend == "mem") {
      auto s = std::make_unique<edis::SimulatorBackend>();
      sim = s.get();
      backend = std::move(s);
    } else {
      std::string text = f.addr;
      if (text.empty())
        if (const char* env = std::getenv("EDIS_ADDR")) text = env;
      auto addr = text.empty() ? std::optional<edis::Address>(edis::Address{})
                               : edis::parse_address(text);
      if (!addr) {
        std::cerr << "edis: bad address '" << text << "'\n";
        return kConnectionError;
      }
      auto conn = edis::RespBackend::connect(addr->host, addr->port,
                                             std::chrono::milliseconds(f.timeout_ms));
      if (f.flushdb) {
        auto r = conn->send({"FLUSHDB"});
        if (r.is_error()) {
          std::cerr << "edis: FLUSHDB failed: " << r.str << "\n";
          return kRuntimeError;
        }
      }
      backend = std::move(conn);
    }

    auto outcome = edis::run_program(program, *report, *backend);
    int code = kOk;
    if (f.json) {
      std::cout << edis::run_outcome_json(outcome) << "\n";
      if (!outcome) code = kRuntimeError;
    } else if (outcome) {
      std::cout << edis::display(*outcome) << "\n";
    } else {
      const auto& e = outcome.error();
      std::cerr << f.file << ":" << e.span.line << ":" << e.span.column
                << ": runtime error: " << edis::opcode_name(e.op) << ": " << e.message << "\n";
      code = kRuntimeError;
    }
    if (f.dump_store) {
      if (sim)
        std::cout << edis::snapshot_json(sim->store().snapshot()) << "\n";
      else
        std::cerr << "edis: --dump-store is only available with --backend mem\n";
    }
    return code;
  } catch (const edis::ConnectionError& e) {
    std::cerr << "edis: " << e.what() << "\n";
    return kConnectionError;
  }
}

int cmd_fuzz(const edis::FuzzConfig& cfg) {
  const auto report = edis::run_fuzz(cfg);
  const auto& s = report.stats;
  std::cout << "mode: " << (cfg.strict ? "strict" : "default") << "\n"
            << "seed: " << cfg.seed << "\n"
            << "iterations: " << cfg.iterations << "\n"
            << "accepted: " << s.accepted << "\n"
            << "rejected: " << s.rejected << "\n"
            << "runtime-WRONGTYPE: " << s.wrongtype << "\n"
            << "runtime-parse-error: " << s.parse_errors << "\n"
            << "decode-failures: " << s.decode_failures << "\n"
            << "other-runtime-errors: " << s.other_errors << "\n";
  if (report.ok()) return kOk;
  const auto& c = *report.counterexample;
  std::cout << "\nsoundness violation (" << edis::verdict_name(c.verdict) << ") at iteration "
            << c.iteration << ": " << c.detail << "\nminimized program:\n"
            << edis::print_program(c.minimized);
  return kSoundnessViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static checker and runner for typed key-value programs"};
  app.require_subcommand(1);

  CheckFlags check;
  auto* c = app.add_subcommand("check", "Type-check a program");
  c->add_option("file", check.file, "Program source, or - for stdin")->required();
  c->add_option("--assume", check.assume, "JSON dictionary assumed to hold initially");
  c->add_flag("--json", check.json, "Emit a JSON report");
  c->add_flag("--strict", check.strict, "Forbid element-type changes on existing containers");

  RunFlags run;
  auto* r = app.add_subcommand("run", "Check, then execute a program");
  r->add_option("file", run.file, "Program source, or - for stdin")->required();
  r->add_option("--backend", run.backend, "mem (simulator) or resp (live server)")
      ->check(CLI::IsMember({"mem", "resp"}));
  r->add_option("--addr", run.addr, "host:port of the server (default $EDIS_ADDR or 127.0.0.1:6379)");
  r->add_option("--timeout", run.timeout_ms, "Reply timeout in milliseconds")
      ->check(CLI::PositiveNumber);
  r->add_option("--assume", run.assume, "JSON dictionary assumed to hold initially");
  r->add_flag("--strict", run.strict, "Check in strict mode");
  r->add_flag("--dump-store", run.dump_store, "Print the simulator store as JSON afterwards");
  r->add_flag("--flushdb", run.flushdb, "Send FLUSHDB before running (resp backend)");
  r->add_flag("--json", run.json, "Emit the outcome as JSON");

  edis::FuzzConfig fuzz;
  auto* z = app.add_subcommand("fuzz", "Differential fuzzing of checker against simulator");
  z->add_option("--iterations", fuzz.iterations, "Programs to generate")
      ->check(CLI::PositiveNumber);
  z->add_option("--seed", fuzz.seed, "RNG seed");
  z->add_option("--max-len", fuzz.max_len, "Maximum commands per program")
      ->check(CLI::PositiveNumber);
  z->add_flag("--strict", fuzz.strict, "Generate and check in strict mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  if (c->parsed()) return cmd_check(check);
  if (r->parsed()) return cmd_run(run);
  return cmd_fuzz(fuzz);
}
