// Copyright 2026 The SLR Engine Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Black-box checks of the installed command-line surface. The binary under
// test comes from the SLR_CLI environment variable (set by ctest).

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

#include "httplib.h"

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void expect(bool condition, const std::string& what) {
  if (!condition) {
    ++g_failures;
    std::cerr << "FAIL: " << what << "\n";
  }
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run(const std::string& cli, const std::string& args,
              const fs::path& scratch) {
  const fs::path out = scratch / "stdout.txt";
  const std::string command = cli + " " + args + " > " + out.string() + " 2> " +
                              (scratch / "stderr.txt").string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.stdout_text = slurp(out);
  return result;
}

} // namespace

int main() {
  const char* cli_env = std::getenv("SLR_CLI");
  if (cli_env == nullptr) {
    std::cerr << "SLR_CLI not set; cannot locate the binary under test\n";
    return 1;
  }
  const std::string cli = cli_env;
  const fs::path scratch =
      fs::temp_directory_path() / "slr_cli_checks";
  fs::create_directories(scratch);

  const fs::path instance = scratch / "imp.json";
  spit(instance, R"({
    "position_weights": [1.0],
    "items": [{"id": "a", "r": 0.1, "v": 10.0},
              {"id": "b", "r": 1.0, "v": 1.0}],
    "lambda": 0.5,
    "epsilon": 1e-6
  })");

  {
    const RunResult r =
        run(cli, "rank --input " + instance.string() + " --mode feasible",
            scratch);
    expect(r.exit_code == 0, "rank exits 0");
    const json body = json::parse(r.stdout_text, nullptr, false);
    expect(!body.is_discarded(), "rank emits JSON");
    expect(body["items"][0] == "b", "rank puts the feasible item first");
    expect(body["relevance_ratio"].get<double>() == 1.0, "relevance ratio");
  }
  {
    const RunResult r = run(
        cli,
        "rank --input " + instance.string() + " --mode randomized --seed 5",
        scratch);
    const json body = json::parse(r.stdout_text, nullptr, false);
    expect(r.exit_code == 0 && body["seed"] == 5, "randomized echoes the seed");
  }
  {
    const RunResult r = run(cli, "rank --input /does/not/exist.json", scratch);
    expect(r.exit_code == 1, "missing input exits 1");
  }
  {
    const RunResult r = run(cli, "definitely-not-a-subcommand", scratch);
    expect(r.exit_code == 2, "unknown subcommand exits 2");
  }
  {
    const RunResult r = run(cli, "rank --no-such-flag", scratch);
    expect(r.exit_code == 2, "unknown flag exits 2");
  }
  {
    const RunResult first = run(
        cli,
        "bench-lambda --m 10 --n 60 --lambdas 0.9,0.95 --trials 30 --seed 4 "
        "--timing off",
        scratch);
    const RunResult second = run(
        cli,
        "bench-lambda --m 10 --n 60 --lambdas 0.9,0.95 --trials 30 --seed 4 "
        "--timing off",
        scratch);
    expect(first.exit_code == 0, "bench-lambda exits 0");
    expect(first.stdout_text == second.stdout_text,
           "bench-lambda CSV is byte-identical for a fixed seed");
    expect(first.stdout_text.rfind("m,n,lambda,", 0) == 0,
           "bench-lambda emits the documented header");
  }
  {
    const RunResult r = run(
        cli, "bench-size --sizes 5x25,10x50 --lambda 0.95 --trials 10 "
             "--seed 2 --timing off",
        scratch);
    expect(r.exit_code == 0, "bench-size exits 0");
    expect(r.stdout_text.find("\n5,25,0.95,10,") != std::string::npos,
           "bench-size row for 5x25");
  }
  {
    const fs::path history = scratch / "history.json";
    spit(history, R"({"history": [
      {"impression": {"position_weights": [1.0],
                      "items": [{"id": "x", "r": 0.8, "v": 1.0},
                                {"id": "y", "r": 1.0, "v": 1.0}],
                      "lambda": 0.5},
       "plan": ["x"]},
      {"impression": {"position_weights": [1.0],
                      "items": [{"id": "x", "r": 0.9, "v": 1.0},
                                {"id": "y", "r": 1.0, "v": 1.0}],
                      "lambda": 0.5},
       "plan": ["x"]}
    ]})");
    const RunResult r = run(
        cli, "tune --input " + history.string() + " --statistic mean "
             "--delta 0.01 --steps 1",
        scratch);
    expect(r.exit_code == 0, "tune exits 0");
    const json body = json::parse(r.stdout_text, nullptr, false);
    expect(!body.is_discarded() &&
               std::abs(body["lambda0"].get<double>() - 0.85) < 1e-12,
           "tune lambda0 is the mean ratio");
  }
  {
    const fs::path model = scratch / "plan.json";
    spit(model, R"({
      "sellers": [{"id": "s0", "inventory_limit": 1},
                  {"id": "s1"}],
      "consumers": [{"id": "c0"}],
      "impressions": [
        {"consumer": "c0", "position_weights": [1.0], "lambda": 0.0,
         "items": [{"id": "a", "r": 0.5, "v": 10.0, "seller": "s0"},
                   {"id": "b", "r": 0.9, "v": 8.0, "seller": "s1"}]},
        {"consumer": "c0", "position_weights": [0.9], "lambda": 0.0,
         "items": [{"id": "c", "r": 0.5, "v": 10.0, "seller": "s0"},
                   {"id": "d", "r": 0.8, "v": 5.0, "seller": "s1"}]}
      ]
    })");
    const fs::path tuned = scratch / "tuned.json";
    const RunResult r = run(
        cli, "plan-duals --input " + model.string() + " --iterations 100 "
             "--step 1.0 --out " + tuned.string(),
        scratch);
    expect(r.exit_code == 0, "plan-duals exits 0");
    const json doc = json::parse(slurp(tuned), nullptr, false);
    expect(!doc.is_discarded() && doc["duals"]["xi"][0].get<double>() > 0.0,
           "plan-duals prices the binding inventory");

    const RunResult ranked = run(
        cli, "plan-rank --input " + tuned.string() + " --impression 0",
        scratch);
    const json plan = json::parse(ranked.stdout_text, nullptr, false);
    expect(ranked.exit_code == 0 && plan["items"][0] == "b",
           "plan-rank respects the inventory price");

    const fs::path lp = scratch / "model.lp";
    const RunResult exported = run(
        cli, "export-lp --input " + model.string() + " --out " + lp.string(),
        scratch);
    expect(exported.exit_code == 0, "export-lp exits 0");
    const std::string text = slurp(lp);
    expect(text.find("Maximize") != std::string::npos &&
               text.find("inv_k0") != std::string::npos &&
               text.find("End") != std::string::npos,
           "export-lp emits LP format with the inventory row");
  }

  {
    // serve: boot on an OS-assigned port, answer requests, stop on SIGTERM.
    const fs::path log = scratch / "serve.log";
    const fs::path pidfile = scratch / "serve.pid";
    const std::string command = cli + " serve --host 127.0.0.1 --port 0 > " +
                                log.string() + " 2>&1 & echo $! > " +
                                pidfile.string();
    expect(std::system(command.c_str()) == 0, "serve launches");

    int port = 0;
    for (int wait = 0; wait < 100 && port == 0; ++wait) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      const std::string text = slurp(log);
      const auto colon = text.rfind(':');
      if (text.find("listening on") != std::string::npos &&
          colon != std::string::npos) {
        port = std::atoi(text.c_str() + colon + 1);
      }
    }
    expect(port > 0, "serve reports its bound port");

    if (port > 0) {
      httplib::Client client("127.0.0.1", port);
      const auto health = client.Get("/healthz");
      expect(health && health->status == 200, "serve answers /healthz");
      const auto ranked =
          client.Post("/rank", slurp(instance), "application/json");
      expect(ranked && ranked->status == 200 &&
                 json::parse(ranked->body)["items"][0] == "b",
             "serve answers /rank");
    }

    const int pid = std::atoi(slurp(pidfile).c_str());
    expect(pid > 0, "serve pid recorded");
    if (pid > 0) {
      kill(pid, SIGTERM);
      int status = 0;
      bool exited = false;
      for (int wait = 0; wait < 100 && !exited; ++wait) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        exited = kill(pid, 0) != 0;
        (void)status;
      }
      expect(exited, "serve shuts down on SIGTERM");
      if (!exited) kill(pid, SIGKILL);
    }
  }

  if (g_failures == 0) {
    std::cout << "all CLI checks passed\n";
    return 0;
  }
  std::cerr << g_failures << " CLI check(s) failed\n";
  return 1;
}
