#include "persched/model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace persched {

void Platform::check() const {
  if (num_procs < 1) throw std::invalid_argument("platform: num_procs must be >= 1");
  if (!(proc_bw > 0)) throw std::invalid_argument("platform: proc_bw must be > 0");
  if (!(total_bw > 0)) throw std::invalid_argument("platform: total_bw must be > 0");
}

void ApplicationSpec::check() const {
  if (procs < 1) throw std::invalid_argument("app '" + id + "': procs must be >= 1");
  if (!(compute_time > 0))
    throw std::invalid_argument("app '" + id + "': compute_time must be > 0");
  if (io_volume < 0) throw std::invalid_argument("app '" + id + "': io_volume must be >= 0");
}

void Scenario::check() const {
  platform.check();
  long total = 0;
  std::set<std::string> ids;
  for (const auto& app : apps) {
    app.check();
    total += app.procs;
    if (!ids.insert(app.id).second)
      throw std::invalid_argument("scenario '" + name + "': duplicate app id '" + app.id + "'");
  }
  if (total > platform.num_procs)
    throw std::invalid_argument("scenario '" + name + "': apps use " + std::to_string(total) +
                                " procs but the platform has " +
                                std::to_string(platform.num_procs));
}

double min_io_time(const ApplicationSpec& app, const Platform& platform) {
  if (app.io_volume == 0) return 0.0;
  double rate = std::min(app.procs * platform.proc_bw, platform.total_bw);
  return app.io_volume / rate;
}

double optimal_efficiency(const ApplicationSpec& app, const Platform& platform) {
  return app.compute_time / (app.compute_time + min_io_time(app, platform));
}

DerivedApp derive(const ApplicationSpec& app, const Platform& platform) {
  DerivedApp d;
  d.max_rate = std::min(app.procs * platform.proc_bw, platform.total_bw);
  d.min_io_time = min_io_time(app, platform);
  d.best_efficiency = optimal_efficiency(app, platform);
  return d;
}

double upper_bound_syseff(const Scenario& scenario) {
  double sum = 0.0;
  for (const auto& app : scenario.apps)
    sum += app.procs * optimal_efficiency(app, scenario.platform);
  return sum / scenario.platform.num_procs;
}

namespace {

struct CatalogApp {
  const char* id;
  int procs;
  double compute_time;
  double io_volume;
};

// Intrepid write-intensive workloads, scaled to a 640-core system: procs
// divided by 64, compute time multiplied by 64, I/O volume unchanged.
constexpr std::array<CatalogApp, 4> kScaledApps = {{
    {"T1", 512, 4480.0, 128.2},     // Turbulence1
    {"T2", 64, 76.8, 235.8},        // Turbulence2
    {"AP", 128, 15360.0, 423.4},    // AstroPhysics
    {"PP", 512, 483456.0, 34304.0}, // PlasmaPhysics
}};

constexpr std::array<CatalogApp, 4> kRawApps = {{
    {"T1", 32768, 70.0, 128.2},
    {"T2", 4096, 1.2, 235.8},
    {"AP", 8192, 240.0, 423.4},
    {"PP", 32768, 7554.0, 34304.0},
}};

// Per set: how many copies of T1, T2, AP, PP run together (640 cores total).
constexpr int kSetCounts[10][4] = {
    {0, 10, 0, 0},  // set1
    {0, 8, 1, 0},   // set2
    {0, 6, 2, 0},   // set3
    {0, 4, 3, 0},   // set4
    {0, 2, 0, 1},   // set5
    {0, 2, 4, 0},   // set6
    {1, 2, 0, 0},   // set7
    {0, 0, 1, 1},   // set8
    {0, 0, 5, 0},   // set9
    {1, 0, 1, 0},   // set10
};

constexpr Platform kJupiter{640, 0.01, 3.0};

Scenario make_set(int index) {
  Scenario s;
  s.name = "set" + std::to_string(index + 1);
  s.platform = kJupiter;
  for (int a = 0; a < 4; ++a) {
    int copies = kSetCounts[index][a];
    const CatalogApp& base = kScaledApps[a];
    for (int c = 1; c <= copies; ++c) {
      ApplicationSpec app;
      app.id = copies > 1 ? std::string(base.id) + "-" + std::to_string(c) : base.id;
      app.procs = base.procs;
      app.compute_time = base.compute_time;
      app.io_volume = base.io_volume;
      s.apps.push_back(std::move(app));
    }
  }
  s.check();
  return s;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (int i = 1; i <= 10; ++i) names.push_back("set" + std::to_string(i));
  for (const auto& raw : kRawApps) names.push_back(std::string("raw:") + raw.id);
  return names;
}

Scenario load_catalog(const std::string& name) {
  if (name.rfind("set", 0) == 0) {
    for (int i = 0; i < 10; ++i)
      if (name == "set" + std::to_string(i + 1)) return make_set(i);
  }
  if (name.rfind("raw:", 0) == 0) {
    for (const auto& raw : kRawApps) {
      if (name.substr(4) != raw.id) continue;
      Scenario s;
      s.name = name;
      s.platform = Platform{raw.procs, kJupiter.proc_bw, kJupiter.total_bw};
      s.apps.push_back({raw.id, raw.procs, raw.compute_time, raw.io_volume});
      s.check();
      return s;
    }
  }
  throw NotFoundError("unknown scenario '" + name + "'");
}

}  // namespace persched
