#include "persched/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace persched::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

static std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ":" + std::to_string(line_of_offset(text, e.byte)) + ": " +
                     e.what());
  }
}

double require_number(const json& obj, const char* field, const std::string& origin) {
  if (!obj.contains(field) || !obj[field].is_number())
    throw ParseError(origin + ": missing or non-numeric field '" + std::string(field) + "'");
  return obj[field].get<double>();
}

}  // namespace

Scenario scenario_from_json(const std::string& text, const std::string& origin) {
  json j = parse_json(text, origin);
  Scenario s;
  s.name = j.value("name", origin);
  if (!j.contains("platform") || !j["platform"].is_object())
    throw ParseError(origin + ": missing 'platform' object");
  const json& p = j["platform"];
  s.platform.num_procs = static_cast<int>(require_number(p, "N", origin + "/platform"));
  s.platform.proc_bw = require_number(p, "b", origin + "/platform");
  s.platform.total_bw = require_number(p, "B", origin + "/platform");
  if (!j.contains("apps") || !j["apps"].is_array() || j["apps"].empty())
    throw ParseError(origin + ": missing non-empty 'apps' array");
  for (size_t i = 0; i < j["apps"].size(); ++i) {
    const json& a = j["apps"][i];
    std::string where = origin + "/apps[" + std::to_string(i) + "]";
    ApplicationSpec app;
    app.id = a.value("id", "app" + std::to_string(i + 1));
    app.procs = static_cast<int>(require_number(a, "p", where));
    app.compute_time = require_number(a, "w", where);
    app.io_volume = require_number(a, "vol", where);
    s.apps.push_back(std::move(app));
  }
  try {
    s.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["platform"] = {{"N", s.platform.num_procs}, {"b", s.platform.proc_bw},
                   {"B", s.platform.total_bw}};
  j["apps"] = json::array();
  for (const auto& a : s.apps)
    j["apps"].push_back(
        {{"id", a.id}, {"p", a.procs}, {"w", a.compute_time}, {"vol", a.io_volume}});
  return j.dump(2) + "\n";
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  return scenario_from_json(read_text_file(path), path.string());
}

Scenario resolve_scenario(const std::string& set_name, const std::string& file) {
  if (!set_name.empty() && !file.empty())
    throw std::invalid_argument("give either a catalog set or a scenario file, not both");
  if (!set_name.empty()) return load_catalog(set_name);
  if (!file.empty()) return load_scenario_file(file);
  throw std::invalid_argument("no scenario given (use --set or --scenario-file)");
}

std::string pattern_to_json(const Pattern& pattern) {
  json j;
  j["T"] = pattern.period();
  j["apps"] = json::array();
  for (const auto& s : pattern.schedules()) {
    json app;
    app["id"] = s.app.id;
    app["instances"] = json::array();
    for (const auto& inst : s.instances) {
      json ji;
      ji["io_start"] = inst.io_start;
      ji["span"] = inst.span;
      ji["segments"] = json::array();
      for (const auto& seg : inst.segments)
        ji["segments"].push_back(
            {{"start", seg.start}, {"duration", seg.duration}, {"rate", seg.rate}});
      app["instances"].push_back(std::move(ji));
    }
    j["apps"].push_back(std::move(app));
  }
  return j.dump(2) + "\n";
}

Pattern pattern_from_json(const std::string& text, const Scenario& scenario) {
  json j = parse_json(text, "pattern");
  Pattern pattern(scenario, require_number(j, "T", "pattern"));
  if (!j.contains("apps") || j["apps"].size() != scenario.apps.size())
    throw ParseError("pattern: app list does not match the scenario");
  for (size_t k = 0; k < scenario.apps.size(); ++k) {
    const json& app = j["apps"][k];
    if (app.value("id", "") != scenario.apps[k].id)
      throw ParseError("pattern: app order does not match the scenario");
    for (const json& ji : app["instances"]) {
      InstanceSchedule inst;
      inst.io_start = require_number(ji, "io_start", "pattern");
      inst.span = require_number(ji, "span", "pattern");
      for (const json& js : ji["segments"])
        inst.segments.push_back({require_number(js, "start", "pattern"),
                                 require_number(js, "duration", "pattern"),
                                 require_number(js, "rate", "pattern")});
      pattern.add_instance(k, std::move(inst));
    }
  }
  return pattern;
}

std::string report_json(const Scenario& scenario, const EngineConfig& config,
                        const PerschedResult& result) {
  json j;
  j["scenario"] = json::parse(scenario_to_json(scenario));
  j["config"] = {
      {"kprime", config.kprime},
      {"epsilon", config.epsilon},
      {"objective", config.objective == Objective::MaxSysEff ? "syseff" : "dilation"},
      {"tiebreak", config.tiebreak == TieBreak::Desc ? "desc" : "asc"},
  };
  j["t_min"] = result.t_min;
  j["t_opt_sweep"] = result.t_opt_sweep;
  j["period"] = result.pattern.period();
  j["upper_bound"] = result.upper_bound;
  j["syseff"] = result.metrics.syseff;
  j["dilation"] = result.metrics.dilation;
  j["wall_seconds"] = result.wall_seconds;
  j["apps"] = json::array();
  for (size_t k = 0; k < scenario.apps.size(); ++k) {
    const auto& am = result.metrics.apps[k];
    const auto& app = scenario.apps[k];
    DerivedApp d = derive(app, scenario.platform);
    j["apps"].push_back({{"id", am.id},
                         {"p", app.procs},
                         {"w", app.compute_time},
                         {"vol", app.io_volume},
                         {"min_io_time", d.min_io_time},
                         {"best_efficiency", d.best_efficiency},
                         {"instances", am.instances},
                         {"periodic_efficiency", am.periodic_efficiency},
                         {"dilation", am.dilation}});
  }
  return j.dump(2) + "\n";
}

void write_schedule_files(const std::filesystem::path& dir, const Scenario& scenario,
                          const EngineConfig& config, const PerschedResult& result) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.json", report_json(scenario, config, result));

  const Pattern& pattern = result.pattern;
  const double period = pattern.period();
  for (const auto& s : pattern.schedules()) {
    std::ostringstream out;
    out << "# app " << s.app.id << ", period " << format_exact(period) << " s\n";
    out << "# io_start io_end bandwidth_per_proc (s, s, GB/s)\n";
    double chain_pos = s.instances.empty() ? 0.0 : s.instances.front().io_start;
    for (size_t i = 0; i < s.instances.size(); ++i) {
      const auto& inst = s.instances[i];
      if (i > 0) {
        const auto& prev = s.instances[i - 1];
        chain_pos += prev.span + cyc_delta(prev.io_end(period), inst.io_start, period);
      }
      for (const auto& seg : inst.segments) {
        double off = cyc_delta(inst.io_start, seg.start, period);
        double a = chain_pos + off;
        out << format_exact(a) << ' ' << format_exact(a + seg.duration) << ' '
            << format_exact(seg.rate / s.app.procs) << '\n';
      }
    }
    write_text_file(dir / (s.app.id + ".sched"), out.str());
  }
}

ScheduleBundle read_schedule_dir(const std::filesystem::path& dir) {
  json report = parse_json(read_text_file(dir / "report.json"), (dir / "report.json").string());
  if (!report.contains("scenario"))
    throw ParseError((dir / "report.json").string() + ": missing 'scenario'");
  Scenario scenario = scenario_from_json(report["scenario"].dump(), (dir / "report.json").string());
  double period = require_number(report, "period", "report.json");

  ScheduleBundle bundle{scenario, period, Pattern(scenario, period),
                        report.value("syseff", 0.0), report.value("dilation", 0.0)};

  for (size_t k = 0; k < scenario.apps.size(); ++k) {
    const auto& app = scenario.apps[k];
    auto path = dir / (app.id + ".sched");
    std::istringstream in(read_text_file(path));
    std::string line;
    int lineno = 0;

    InstanceSchedule inst;
    double acc = 0, inst_first = 0, inst_end = 0;
    bool open = false;
    auto close_instance = [&]() {
      inst.io_start = wrap_time(inst_first, period);
      inst.span = inst_end - inst_first;
      try {
        bundle.pattern.add_instance(k, std::move(inst));
      } catch (const CapacityExceededError& e) {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": transfers exceed the platform capacity at t=" +
                              format_double(e.at_time));
      }
      inst = {};
      acc = 0;
      open = false;
    };

    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      double a = 0, b = 0, bw = 0;
      if (std::sscanf(line.c_str(), "%lf %lf %lf", &a, &b, &bw) != 3)
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": expected `io_start io_end bandwidth_per_proc`");
      if (b < a || bw < 0)
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ": malformed transfer interval");
      if (!open) {
        open = true;
        inst_first = a;
      }
      double rate = bw * app.procs;
      inst.segments.push_back({wrap_time(a, period), b - a, rate});
      inst_end = b;
      acc += (b - a) * rate;
      if (acc >= app.io_volume * (1.0 - kVolRelTol)) close_instance();
    }
    if (open)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": trailing partial instance (" + format_double(acc) + " of " +
                            format_double(app.io_volume) + " GB)");
  }
  return bundle;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "T,syseff,dilation\n";
  for (const auto& r : rows)
    out << format_double(r.period) << ',' << format_double(r.syseff) << ','
        << format_double(r.dilation) << '\n';
  return out.str();
}

std::string kprime_csv(const std::vector<KprimeRow>& rows) {
  std::ostringstream out;
  out << "kprime,syseff,dilation,syseff_norm,dilation_norm\n";
  for (const auto& r : rows)
    out << format_double(r.kprime) << ',' << format_double(r.syseff) << ','
        << format_double(r.dilation) << ',' << format_double(r.syseff_norm) << ','
        << format_double(r.dilation_norm) << '\n';
  return out.str();
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream out;
  out << "app,instance,compute_start,io_start,io_end,bytes\n";
  for (size_t k = 0; k < trace.instances.size(); ++k)
    for (const auto& inst : trace.instances[k])
      out << trace.app_ids[k] << ',' << inst.index << ',' << format_double(inst.compute_start)
          << ',' << format_double(inst.io_start) << ',' << format_double(inst.io_end) << ','
          << format_double(inst.volume) << '\n';
  return out.str();
}

}  // namespace persched::io
