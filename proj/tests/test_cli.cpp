#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "persched/cli.hpp"
#include "persched/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = persched::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("persched_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenarios command lists the catalog") {
  auto r = cli({"scenarios"});
  CHECK(r.code == 0);
  CHECK(r.out.find("set1") != std::string::npos);
  CHECK(r.out.find("set10") != std::string::npos);
  CHECK(r.out.find("0.17249") != std::string::npos);
}

TEST_CASE("unknown scenario exits with the usage code") {
  auto r = cli({"schedule", "--set", "nope"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown scenario") != std::string::npos);
}

TEST_CASE("bad flags and missing subcommands exit with the usage code") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"schedule", "--bogus"}).code == 2);
  CHECK(cli({"simulate", "--periods", "3"}).code == 2);  // neither dir nor baseline
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("simulate rejects a non-positive period count") {
  auto r = cli({"simulate", "--baseline", "--set", "set1", "--periods", "0"});
  CHECK(r.code == 2);
}

TEST_CASE("schedule writes files that simulate can replay") {
  auto dir = fresh_dir("replay");
  auto r = cli({"schedule", "--set", "set9", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("SysEfficiency") != std::string::npos);
  CHECK(fs::exists(dir / "report.json"));
  int sched_files = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".sched") ++sched_files;
  CHECK(sched_files == 5);

  auto sim = cli({"simulate", "--schedule-dir", dir.string(), "--periods", "50",
                  "--out", (dir / "trace.csv").string()});
  CHECK(sim.code == 0);
  CHECK(sim.out.find("periodic efficiency") != std::string::npos);
  std::string csv = persched::io::read_text_file(dir / "trace.csv");
  CHECK(csv.rfind("app,instance,compute_start,io_start,io_end,bytes\n", 0) == 0);

  // byte-identical on a repeated run
  auto again = cli({"simulate", "--schedule-dir", dir.string(), "--periods", "50",
                    "--out", (dir / "trace2.csv").string()});
  CHECK(again.code == 0);
  CHECK(csv == persched::io::read_text_file(dir / "trace2.csv"));
}

TEST_CASE("sweep emits one row per tried period") {
  auto dir = fresh_dir("sweep");
  auto r = cli({"sweep", "--set", "set1", "--out", (dir / "sweep.csv").string()});
  CHECK(r.code == 0);
  std::string csv = persched::io::read_text_file(dir / "sweep.csv");
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 233);  // header + 232 rows
}

TEST_CASE("kprime-sweep normalizes against the largest kprime") {
  auto r = cli({"kprime-sweep", "--set", "set9", "--kprimes", "3", "--out", ""});
  CHECK(r.code == 0);
  CHECK(r.out.find("kprime,syseff,dilation,syseff_norm,dilation_norm\n") == 0);
  CHECK(r.out.find(",1,1\n") != std::string::npos);  // self-normalized
}

TEST_CASE("baseline simulation reports the congested fixed point of set1") {
  auto r = cli({"simulate", "--baseline", "--set", "set1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("steady SysEfficiency 0.0890") != std::string::npos);
}
