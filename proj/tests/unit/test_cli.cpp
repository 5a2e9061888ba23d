#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "pplab_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result pplab(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string("\"") + PPLAB_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("validate accepts the default configuration") {
  const Result r = pplab("validate");
  CHECK(r.status == 0);
  CHECK(r.out.find("episodes: 40000") != std::string::npos);
}

TEST_CASE("validate rejects a bad document and names the key") {
  const fs::path cfg = work_dir() / "bad.yaml";
  std::ofstream(cfg) << "gamma: 1.5\n";
  const Result r = pplab("validate --config \"" + cfg.string() + "\"");
  CHECK(r.status == 2);
  CHECK(r.err.find("gamma") != std::string::npos);
}

TEST_CASE("unknown subcommands and flags give usage and a nonzero exit") {
  CHECK(pplab("frobnicate").status != 0);
  const Result r = pplab("run --no-such-flag");
  CHECK(r.status != 0);
  CHECK_FALSE(r.err.empty());
  CHECK(pplab("").status != 0);
}

TEST_CASE("report without an archive names the missing path") {
  const fs::path missing = work_dir() / "absent";
  const Result r = pplab("report --out \"" + missing.string() + "\"");
  CHECK(r.status != 0);
  CHECK(r.err.find((missing / "manifest.json").string()) != std::string::npos);
}

TEST_CASE("run, report and curves smoke path") {
  const fs::path archive = work_dir() / "smoke";
  const Result run = pplab("run --episodes 200 --seeds 2 --workers 1 --out \"" + archive.string() + "\"");
  REQUIRE(run.status == 0);
  CHECK(fs::exists(archive / "manifest.json"));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(archive / "runs"))
    if (e.is_regular_file()) ++files;
  CHECK(files == 24);

  const Result report = pplab("report --out \"" + archive.string() + "\"");
  REQUIRE(report.status == 0);
  // Three regime tables with four pairing rows each.
  CHECK(count(report.out, "CQL–CQL") >= 3);
  const std::string summary = slurp(archive / "summary.csv");
  std::size_t rows = count(summary, "\n");
  CHECK(rows == 1 + 3 * 4 * 3);
  CHECK(summary.find(",2,") != std::string::npos);  // n_seeds column
  const std::string stats = slurp(archive / "stats.csv");
  CHECK(count(stats, "\n") == 1 + 3 * 3 * 6);

  const Result curves = pplab("curves --stride 10 --window 20 --out \"" + archive.string() + "\"");
  REQUIRE(curves.status == 0);
  const std::string curve = slurp(archive / "curves" / "curves_base_episode_length.csv");
  CHECK(count(curve, "\n") == 1 + 20);
}
