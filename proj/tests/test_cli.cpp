#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path root = fs::current_path() / "cli_scratch";

// Runs the CLI with output captured to <name>.log; returns its exit status.
int run(const std::string& name, const std::string& args, const std::string& env = "") {
  fs::create_directories(root);
  const std::string cmd =
      env + " \"" DROPLET_CLI_PATH "\" " + args + " > \"" + (root / (name + ".log")).string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path fresh(const std::string& name) {
  const auto dir = root / name;
  fs::remove_all(dir);
  return dir;
}

bool empty_or_missing(const fs::path& dir) { return !fs::exists(dir) || fs::is_empty(dir); }

}  // namespace

TEST_CASE("constants") {
  const auto dir = fresh("constants");
  REQUIRE(run("constants", "constants --d 2 --out " + dir.string()) == 0);
  for (const char* f : {"constants.csv", "constants.json", "manifest.json"}) CHECK(fs::exists(dir / f));
  const auto csv = slurp(dir / "constants.csv");
  CHECK(csv.find("C_star") != std::string::npos);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "constants");
  CHECK(manifest["format_version"] == 1);
  // Re-running gives a byte-identical table.
  REQUIRE(run("constants2", "constants --d 2 --out " + dir.string()) == 0);
  CHECK(slurp(dir / "constants.csv") == csv);
  CHECK(run("constants3", "constants --d 3 --out " + fresh("constants3").string()) == 0);
}

TEST_CASE("output directory from the environment") {
  const auto base = fresh("envdir");
  REQUIRE(run("envdir", "constants", "DROPLET_OUT_DIR=\"" + base.string() + "\"") == 0);
  CHECK(fs::exists(base / "constants" / "constants.csv"));
}

TEST_CASE("precondition failures exit 2 without artifacts") {
  const auto dir = fresh("bad");
  CHECK(run("coarse", "minimize --L 200 --N 128 --out " + dir.string()) == 2);
  CHECK(empty_or_missing(dir));
  CHECK(slurp(root / "coarse.log").find("resolution") != std::string::npos);
  CHECK(run("both", "minimize --K 3 --n -0.9 --L 50 --N 128 --out " + dir.string()) == 2);
  CHECK(run("badn", "minimize --n 1.5 --L 50 --N 128 --out " + dir.string()) == 2);
  CHECK(run("unknown", "minimize --bogus 1 --out " + dir.string()) == 2);
  CHECK(run("method", "minimize --L 50 --N 128 --method newton --out " + dir.string()) == 2);
  CHECK(run("seed", "minimize --L 50 --N 128 --seeds blob --out " + dir.string()) == 2);
  CHECK(run("expand3", "expand --d 3 --L 50 --N 64 --out " + dir.string()) == 2);
  CHECK(run("nodroplet", "expand --L 100 --N 256 --k-ratio 0.5 --out " + dir.string()) == 2);
  CHECK(empty_or_missing(dir));
  CHECK(run("help", "--help") == 0);
}

TEST_CASE("minimize") {
  const auto dir = fresh("minimize");
  REQUIRE(run("minimize", "minimize --L 50 --N 128 --k-ratio 2 --out " + dir.string()) == 0);
  for (const char* f : {"field.bin", "energy_trace.csv", "diagnostics.json", "manifest.json"}) CHECK(fs::exists(dir / f));
  const auto diag = nlohmann::json::parse(slurp(dir / "diagnostics.json"));
  CHECK(diag.dump().find("droplet") != std::string::npos);
  const auto trace = slurp(dir / "energy_trace.csv");
  CHECK(trace.rfind("iter,energy,residual\n", 0) == 0);
  REQUIRE(run("minimize2", "minimize --L 50 --N 128 --k-ratio 2 --out " + dir.string()) == 0);
  CHECK(slurp(dir / "energy_trace.csv") == trace);
}

TEST_CASE("convergence failure exits 3") {
  const auto dir = fresh("starved");
  CHECK(run("starved", "minimize --L 50 --N 128 --k-ratio 2 --max-iters 2 --seeds eta=0.8 --out " + dir.string()) == 3);
}

TEST_CASE("phi-scan, sweep and expand") {
  const auto scan = fresh("phi");
  CHECK(run("phi", "phi-scan --d 2 --out " + scan.string()) == 0);
  CHECK(fs::exists(scan / "phi_scan.csv"));
  CHECK(fs::exists(scan / "manifest.json"));

  const auto sweep = fresh("sweep");
  REQUIRE(run("sweep", "sweep --L 50 --N 128 --from 0.5 --to 2 --count 4 --out " + sweep.string()) == 0);
  CHECK(fs::exists(sweep / "sweep.csv"));
  const auto js = nlohmann::json::parse(slurp(sweep / "sweep.json"));
  CHECK(js["transition_bracket"].size() == 2);
  CHECK(js["flips"] == 1);
  CHECK(js["monotone"] == true);

  const auto ex = fresh("expand");
  REQUIRE(run("expand", "expand --L 100 --N 256 --k-ratio 2 --skip-minimize --out " + ex.string()) == 0);
  const auto je = nlohmann::json::parse(slurp(ex / "expand.json"));
  CHECK(je.dump().find("r1") != std::string::npos);
  CHECK(fs::exists(ex / "first_order.bin"));
}
