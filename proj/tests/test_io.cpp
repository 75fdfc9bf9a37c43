#include <filesystem>

#include "doctest.h"
#include "persched/io.hpp"
#include "persched/simulator.hpp"

using namespace persched;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("persched_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario JSON round trip") {
  Scenario sc = load_catalog("set5");
  std::string text = io::scenario_to_json(sc);
  Scenario back = io::scenario_from_json(text, "roundtrip");
  CHECK(back.platform.num_procs == sc.platform.num_procs);
  CHECK(back.platform.proc_bw == sc.platform.proc_bw);
  REQUIRE(back.apps.size() == sc.apps.size());
  for (size_t i = 0; i < sc.apps.size(); ++i) {
    CHECK(back.apps[i].id == sc.apps[i].id);
    CHECK(back.apps[i].procs == sc.apps[i].procs);
    CHECK(back.apps[i].compute_time == sc.apps[i].compute_time);
    CHECK(back.apps[i].io_volume == sc.apps[i].io_volume);
  }
}

TEST_CASE("malformed scenario files carry position context") {
  try {
    io::scenario_from_json("{\n  \"platform\": {\n", "bad.json");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
  }

  try {
    io::scenario_from_json(R"({"platform":{"N":640,"b":0.01,"B":3},"apps":[{"id":"x","p":64,"w":10}]})",
                           "field.json");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(std::string(e.what()).find("vol") != std::string::npos);
  }

  // violating the core budget is a parse-level rejection too
  CHECK_THROWS_AS(io::scenario_from_json(
                      R"({"platform":{"N":64,"b":0.01,"B":3},"apps":[{"id":"x","p":128,"w":10,"vol":1}]})",
                      "over.json"),
                  io::ParseError);
}

TEST_CASE("resolve_scenario dispatches and rejects") {
  CHECK(io::resolve_scenario("set2", "").apps.size() == 9);
  CHECK_THROWS_AS(io::resolve_scenario("nope", ""), NotFoundError);
  CHECK_THROWS_AS(io::resolve_scenario("", ""), std::invalid_argument);
  CHECK_THROWS_AS(io::resolve_scenario("set1", "also-a-file"), std::invalid_argument);

  auto dir = fresh_dir("scenario");
  io::write_text_file(dir / "sc.json", io::scenario_to_json(load_catalog("set7")));
  Scenario sc = io::resolve_scenario("", (dir / "sc.json").string());
  CHECK(sc.apps.size() == 3);
}

TEST_CASE("pattern JSON round trip preserves the schedule exactly") {
  Scenario sc = load_catalog("set2");
  EngineConfig cfg;
  cfg.threads = 0;
  Pattern p = run_persched(sc, cfg).pattern;
  std::string text = io::pattern_to_json(p);
  Pattern back = io::pattern_from_json(text, sc);
  CHECK(back.validate().empty());
  CHECK(io::pattern_to_json(back) == text);
  CHECK(back.syseff() == p.syseff());
  CHECK(back.dilation() == p.dilation());
}

TEST_CASE("schedule files round trip through the filesystem") {
  Scenario sc = load_catalog("set3");
  EngineConfig cfg;
  cfg.threads = 0;
  PerschedResult res = run_persched(sc, cfg);
  auto dir = fresh_dir("sched");
  io::write_schedule_files(dir, sc, cfg, res);

  CHECK(fs::exists(dir / "report.json"));
  for (const auto& app : sc.apps) CHECK(fs::exists(dir / (app.id + ".sched")));

  io::ScheduleBundle bundle = io::read_schedule_dir(dir);
  CHECK(bundle.period == res.pattern.period());
  CHECK(bundle.pattern.validate().empty());
  CHECK(bundle.pattern.syseff() == doctest::Approx(res.metrics.syseff).epsilon(1e-9));
  CHECK(bundle.pattern.dilation() == doctest::Approx(res.metrics.dilation).epsilon(1e-9));
  for (size_t k = 0; k < sc.apps.size(); ++k)
    CHECK(bundle.pattern.instance_count(k) == res.pattern.instance_count(k));

  // unrolling the reconstruction gives the same trace as the original
  CHECK(io::trace_csv(unroll(bundle.pattern, 5)) == io::trace_csv(unroll(res.pattern, 5)));
}

TEST_CASE("truncated schedule files are rejected with the offending line") {
  Scenario sc = load_catalog("set9");
  EngineConfig cfg;
  cfg.threads = 0;
  PerschedResult res = run_persched(sc, cfg);
  auto dir = fresh_dir("broken");
  io::write_schedule_files(dir, sc, cfg, res);

  // halve the last transfer of one app: the volume no longer adds up
  auto victim = dir / (sc.apps[0].id + ".sched");
  std::string text = io::read_text_file(victim);
  size_t cut = text.find_last_of(' ');
  io::write_text_file(victim, text.substr(0, cut) + " 0.001\n");

  CHECK_THROWS_AS(io::read_schedule_dir(dir), io::ValidationError);
  try {
    io::read_schedule_dir(dir);
  } catch (const io::ValidationError& e) {
    CHECK(std::string(e.what()).find(".sched:") != std::string::npos);
  }
}

TEST_CASE("CSV writers are deterministic and locale-proof") {
  Scenario sc = load_catalog("set7");
  EngineConfig cfg;
  auto rows = sweep_report(sc, cfg);
  CHECK(io::sweep_csv(rows) == io::sweep_csv(sweep_report(sc, cfg)));
  std::string csv = io::sweep_csv(rows);
  CHECK(csv.rfind("T,syseff,dilation\n", 0) == 0);
  CHECK(csv.find(',') != std::string::npos);
  CHECK(csv.find(';') == std::string::npos);

  CHECK(io::format_double(0.123456789123) == "0.123456789");
  CHECK(io::format_double(368.4375) == "368.4375");
}
