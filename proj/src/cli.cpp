#include "persched/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "persched/engine.hpp"
#include "persched/io.hpp"
#include "persched/model.hpp"
#include "persched/simulator.hpp"

namespace persched::cli {

namespace {

int env_threads() {
  const char* v = std::getenv("PERSCHED_THREADS");
  if (!v || !*v) return 0;  // all cores
  int n = std::atoi(v);
  return n > 0 ? n : 1;
}

struct ScheduleOpts {
  std::string set;
  std::string file;
  double kprime = 10.0;
  double epsilon = 0.01;
  std::string objective = "syseff";
  std::string tiebreak = "desc";
  std::string out;
};

EngineConfig make_config(const ScheduleOpts& o) {
  EngineConfig cfg;
  cfg.kprime = o.kprime;
  cfg.epsilon = o.epsilon;
  cfg.objective = o.objective == "dilation" ? Objective::MinDilation : Objective::MaxSysEff;
  cfg.tiebreak = o.tiebreak == "asc" ? TieBreak::Asc : TieBreak::Desc;
  cfg.threads = env_threads();
  return cfg;
}

void add_scenario_flags(CLI::App* cmd, ScheduleOpts& o) {
  cmd->add_option("--set", o.set, "catalog scenario name (see `persched scenarios`)");
  cmd->add_option("--scenario-file", o.file, "scenario JSON file");
}

void add_engine_flags(CLI::App* cmd, ScheduleOpts& o) {
  cmd->add_option("--kprime", o.kprime, "largest tried period as a multiple of the smallest");
  cmd->add_option("--epsilon", o.epsilon, "geometric growth factor of the period sweep");
  cmd->add_option("--objective", o.objective, "optimization target")
      ->check(CLI::IsMember({"syseff", "dilation"}));
  cmd->add_option("--tiebreak", o.tiebreak, "w/tio tie-break direction")
      ->check(CLI::IsMember({"asc", "desc"}));
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    io::write_text_file(out_path, text);
}

void print_run_summary(std::ostream& out, const Scenario& sc, const PerschedResult& r) {
  out << sc.name << ": period " << io::format_double(r.pattern.period()) << " s, SysEfficiency "
      << io::format_double(r.metrics.syseff) << " (upper bound "
      << io::format_double(r.upper_bound) << "), Dilation " << io::format_double(r.metrics.dilation)
      << ", " << io::format_double(r.wall_seconds) << " s wall\n";
  for (const auto& a : r.metrics.apps)
    out << "  " << a.id << ": instances " << a.instances << ", periodic efficiency "
        << io::format_double(a.periodic_efficiency) << ", dilation "
        << io::format_double(a.dilation) << '\n';
}

int cmd_scenarios(std::ostream& out) {
  for (const auto& name : catalog_names()) {
    Scenario sc = load_catalog(name);
    long procs = 0;
    for (const auto& a : sc.apps) procs += a.procs;
    out << name << ": " << sc.apps.size() << " apps, " << procs << " cores, upper bound "
        << io::format_double(upper_bound_syseff(sc)) << '\n';
  }
  return 0;
}

int cmd_schedule(const ScheduleOpts& o, std::ostream& out) {
  Scenario sc = io::resolve_scenario(o.set, o.file);
  EngineConfig cfg = make_config(o);
  PerschedResult res = run_persched(sc, cfg);
  if (!o.out.empty()) io::write_schedule_files(o.out, sc, cfg, res);
  print_run_summary(out, sc, res);
  return 0;
}

int cmd_sweep(const ScheduleOpts& o, std::ostream& out) {
  Scenario sc = io::resolve_scenario(o.set, o.file);
  EngineConfig cfg = make_config(o);
  emit(io::sweep_csv(sweep_report(sc, cfg)), o.out, out);
  return 0;
}

int cmd_kprime_sweep(const ScheduleOpts& o, std::vector<double> kprimes, std::ostream& out) {
  Scenario sc = io::resolve_scenario(o.set, o.file);
  if (kprimes.empty()) throw std::invalid_argument("kprime-sweep: empty --kprimes list");
  std::sort(kprimes.begin(), kprimes.end());
  EngineConfig cfg = make_config(o);
  std::vector<io::KprimeRow> rows;
  for (double kp : kprimes) {
    cfg.kprime = kp;
    PerschedResult res = run_persched(sc, cfg);
    rows.push_back({kp, res.metrics.syseff, res.metrics.dilation, 0, 0});
  }
  const auto& ref = rows.back();  // largest kprime
  for (auto& r : rows) {
    r.syseff_norm = ref.syseff > 0 ? r.syseff / ref.syseff : 1.0;
    r.dilation_norm = ref.dilation > 0 ? r.dilation / ref.dilation : 1.0;
  }
  emit(io::kprime_csv(rows), o.out, out);
  return 0;
}

struct SimulateOpts {
  std::string schedule_dir;
  bool baseline = false;
  std::string set;
  std::string file;
  int periods = 100;
  double horizon = 0;
  std::string out;
};

int cmd_simulate(const SimulateOpts& o, std::ostream& out, std::ostream& err) {
  if (o.baseline) {
    Scenario sc = io::resolve_scenario(o.set, o.file);
    double horizon = o.horizon > 0 ? o.horizon : 20.0 * min_feasible_period(sc);
    BaselineResult res = fair_share_baseline(sc, horizon);
    out << sc.name << " without scheduler, horizon " << io::format_double(horizon)
        << " s: steady SysEfficiency " << io::format_double(res.steady_syseff) << '\n';
    for (const auto& a : res.apps)
      out << "  " << a.id << ": " << a.completed << " instances, bandwidth slowdown "
          << io::format_double(100.0 * a.slowdown) << "%, efficiency "
          << io::format_double(a.efficiency) << '\n';
    if (!o.out.empty()) io::write_text_file(o.out, io::trace_csv(res.trace));
    return 0;
  }

  io::ScheduleBundle bundle = io::read_schedule_dir(o.schedule_dir);
  auto violations = bundle.pattern.validate();
  if (!violations.empty()) {
    for (const auto& v : violations)
      err << "schedule inconsistency: " << v.what << (v.app_id.empty() ? "" : " (app " + v.app_id + ")")
          << " at t=" << io::format_double(v.time) << '\n';
    return 2;
  }
  Trace trace = unroll(bundle.pattern, o.periods);
  out << "schedule " << o.schedule_dir << " unrolled for " << o.periods
      << " periods (T=" << io::format_double(bundle.period) << " s)\n";
  for (size_t k = 0; k < trace.instances.size(); ++k) {
    double expected = bundle.pattern.periodic_efficiency(k);
    if (trace.instances[k].empty()) {
      out << "  " << trace.app_ids[k] << ": no instances in the pattern\n";
      continue;
    }
    double dk = trace.instances[k].back().io_end;
    double actual = actual_efficiency(trace, k, dk);
    double rel = expected > 0 ? std::abs(actual - expected) / expected : 0.0;
    out << "  " << trace.app_ids[k] << ": periodic efficiency "
        << io::format_double(expected) << ", unrolled " << io::format_double(actual)
        << " (rel diff " << io::format_double(rel) << ")\n";
  }
  if (!o.out.empty()) io::write_text_file(o.out, io::trace_csv(trace));
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"periodic I/O schedules for concurrent HPC applications"};
  app.name("persched");
  app.require_subcommand(1);

  ScheduleOpts sched_opts;
  auto* sched = app.add_subcommand("schedule", "compute the best periodic schedule");
  add_scenario_flags(sched, sched_opts);
  add_engine_flags(sched, sched_opts);
  sched->add_option("--out", sched_opts.out, "directory for report.json and per-app .sched files");

  ScheduleOpts sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "metrics for every tried period, as CSV");
  add_scenario_flags(sweep, sweep_opts);
  add_engine_flags(sweep, sweep_opts);
  sweep->add_option("--out", sweep_opts.out, "CSV output path (default: stdout)");

  ScheduleOpts kp_opts;
  std::vector<double> kprimes{2, 3, 5, 10, 20, 50, 100};
  auto* kps = app.add_subcommand("kprime-sweep", "sensitivity of the results to kprime, as CSV");
  add_scenario_flags(kps, kp_opts);
  add_engine_flags(kps, kp_opts);
  kps->add_option("--kprimes", kprimes, "kprime values to try")->delimiter(',');
  kps->add_option("--out", kp_opts.out, "CSV output path (default: stdout)");

  SimulateOpts sim_opts;
  auto* sim = app.add_subcommand("simulate", "unroll a schedule or run the no-scheduler baseline");
  sim->add_option("--schedule-dir", sim_opts.schedule_dir, "directory written by `schedule`");
  sim->add_flag("--baseline", sim_opts.baseline, "simulate congestion without any scheduler");
  sim->add_option("--set", sim_opts.set, "catalog scenario (baseline mode)");
  sim->add_option("--scenario-file", sim_opts.file, "scenario JSON file (baseline mode)");
  sim->add_option("--periods", sim_opts.periods, "number of pattern repetitions")
      ->check(CLI::PositiveNumber);
  sim->add_option("--horizon", sim_opts.horizon, "baseline simulation horizon in seconds");
  sim->add_option("--out", sim_opts.out, "trace CSV output path");

  auto* lst = app.add_subcommand("scenarios", "list the built-in scenario catalog");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (lst->parsed()) return cmd_scenarios(out);
    if (sched->parsed()) return cmd_schedule(sched_opts, out);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, out);
    if (kps->parsed()) return cmd_kprime_sweep(kp_opts, kprimes, out);
    if (sim->parsed()) {
      if (!sim_opts.baseline && sim_opts.schedule_dir.empty())
        throw std::invalid_argument("simulate needs --schedule-dir or --baseline");
      return cmd_simulate(sim_opts, out, err);
    }
    err << "error: no command given\n";
    return 2;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const io::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace persched::cli
