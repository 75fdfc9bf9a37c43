#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "persched/engine.hpp"
#include "persched/simulator.hpp"

namespace persched::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 9 significant digits, '.' decimal point, no locale surprises.
std::string format_double(double v);

Scenario scenario_from_json(const std::string& text, const std::string& origin);
std::string scenario_to_json(const Scenario& scenario);
Scenario load_scenario_file(const std::filesystem::path& path);

// Either a catalog name or a scenario file; exactly one must be given.
Scenario resolve_scenario(const std::string& set_name, const std::string& file);

std::string pattern_to_json(const Pattern& pattern);
Pattern pattern_from_json(const std::string& text, const Scenario& scenario);

// Per-app schedule files ("<id>.sched", lines `io_start io_end bw_per_proc`)
// plus report.json next to them. Times are written on the period clock; a
// transfer wrapping past T keeps increasing times instead of jumping back.
void write_schedule_files(const std::filesystem::path& dir, const Scenario& scenario,
                          const EngineConfig& config, const PerschedResult& result);

struct ScheduleBundle {
  Scenario scenario;
  double period = 0;
  Pattern pattern;
  double reported_syseff = 0;
  double reported_dilation = 0;
};

ScheduleBundle read_schedule_dir(const std::filesystem::path& dir);

std::string report_json(const Scenario& scenario, const EngineConfig& config,
                        const PerschedResult& result);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct KprimeRow {
  double kprime = 0;
  double syseff = 0;
  double dilation = 0;
  double syseff_norm = 0;    // vs the largest kprime in the sweep
  double dilation_norm = 0;
};

std::string kprime_csv(const std::vector<KprimeRow>& rows);

std::string trace_csv(const Trace& trace);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace persched::io
