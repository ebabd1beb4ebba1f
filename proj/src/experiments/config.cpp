#include "ovlab/experiments/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace ovlab {

std::string toString(Experiment e) {
  switch (e) {
    case Experiment::Dispersion: return "dispersion";
    case Experiment::Inflate: return "inflate";
    case Experiment::Simulate: return "simulate";
    case Experiment::Sweep: return "sweep";
    case Experiment::Audit: return "audit";
  }
  return "?";
}

std::string toString(Generator g) {
  switch (g) {
    case Generator::Zero: return "zero";
    case Generator::TaylorGreen: return "taylor-green";
    case Generator::RandomSmooth: return "random-smooth";
    case Generator::ModeProbe: return "mode-probe";
  }
  return "?";
}

namespace {

template <typename E>
E lookup(const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, E>> table) {
  for (const auto& [name, e] : table)
    if (value == name) return e;
  std::string allowed;
  for (const auto& [name, e] : table) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  throw ConfigError(key + ": unknown value '" + value + "' (expected one of " + allowed + ")");
}

/// Typed access to one TOML table that remembers which keys were consumed.
class Section {
public:
  Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  bool present() const { return table_ != nullptr; }

  double number(const char* key, double fallback) {
    const toml::node* n = take(key);
    if (!n) return fallback;
    if (auto v = n->value_exact<double>()) return *v;
    if (auto v = n->value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw ConfigError(path(key) + ": expected a number");
  }

  std::int64_t integer(const char* key, std::int64_t fallback) {
    const toml::node* n = take(key);
    if (!n) return fallback;
    if (auto v = n->value_exact<std::int64_t>()) return *v;
    throw ConfigError(path(key) + ": expected an integer");
  }

  bool boolean(const char* key, bool fallback) {
    const toml::node* n = take(key);
    if (!n) return fallback;
    if (auto v = n->value_exact<bool>()) return *v;
    throw ConfigError(path(key) + ": expected true or false");
  }

  std::optional<std::string> string(const char* key) {
    const toml::node* n = take(key);
    if (!n) return std::nullopt;
    if (auto v = n->value_exact<std::string>()) return *v;
    throw ConfigError(path(key) + ": expected a string");
  }

  const toml::node* raw(const char* key) { return take(key); }

  std::vector<double> numbers(const char* key) {
    std::vector<double> out;
    const toml::node* n = take(key);
    if (!n) return out;
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError(path(key) + ": expected an array of numbers");
    for (const auto& e : *arr) {
      if (auto v = e.value_exact<double>()) out.push_back(*v);
      else if (auto i = e.value_exact<std::int64_t>()) out.push_back(static_cast<double>(*i));
      else throw ConfigError(path(key) + ": expected an array of numbers");
    }
    return out;
  }

  std::string path(const char* key) const { return name_.empty() ? key : name_ + "." + key; }

  void rejectUnknown() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      const std::string key(k.str());
      if (!used_.count(key)) throw ConfigError("unknown key '" + (name_.empty() ? key : name_ + "." + key) + "'");
    }
  }

  void markUsed(const std::string& key) { used_.insert(key); }

private:
  const toml::node* take(const char* key) {
    used_.insert(key);
    return table_ ? table_->get(key) : nullptr;
  }

  const toml::table* table_;
  std::string name_;
  std::set<std::string> used_;
};

int checkedInt(std::int64_t v, const std::string& what) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(what + ": out of range");
  return static_cast<int>(v);
}

} // namespace

double RunConfig::tEndFor(double epsilon) const {
  return run.tEnd ? *run.tEnd : std::pow(epsilon, -2.0 / 3.0);
}

void RunConfig::validate() const {
  grid.validate();
  params.validate();
  stepper.validate();
  if (system == System::EulerOldroydB && stepper.scheme != Scheme::ExplicitRk4)
    throw ConfigError("stepper.scheme: the euler system uses explicit-rk4");
  if (system == System::VoigtOldroydB && stepper.scheme != Scheme::ExpIntImex)
    throw ConfigError("stepper.scheme: the voigt system uses expint-imex");
  if (!stepper.dealias) throw ConfigError("stepper.dealias: production runs require dealiasing");
  if (run.tEnd && !(*run.tEnd >= 0.0)) throw ConfigError("run.t_end must be >= 0 or \"auto\"");
  if (run.diagnosticsEvery < 1) throw ConfigError("run.diagnostics_every must be >= 1");
  if (run.snapshotEvery < 0) throw ConfigError("run.snapshot_every must be >= 0");
  if (!(initial.amplitude >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
  if (initial.generator == Generator::ModeProbe && (initial.k <= 0 || 3 * initial.k > grid.nx))
    throw ConfigError("initial.k must lie in the dealiased band of the grid");
  if (initial.generator == Generator::RandomSmooth &&
      (initial.cutoff < 1 || 3 * initial.cutoff > std::min(grid.nx, grid.ny)))
    throw ConfigError("initial.cutoff must lie in the dealiased band of the grid");
  if (dispersion.kMax < 1) throw ConfigError("dispersion.k_max must be >= 1");
  if (!(dispersion.dtFactor > 0.0 && dispersion.dtFactor < 0.1))
    throw ConfigError("dispersion.dt_factor must lie in (0, 0.1)");
  if (!(dispersion.windowFactor > 0.0)) throw ConfigError("dispersion.window_factor must be positive");
  for (int k : inflate.ks)
    if (k <= 1) throw ConfigError("inflate.k entries must be > 1");
  if (inflate.s < 3.0) throw ConfigError("inflate.s must be >= 3");
  if (!(inflate.dt > 0.0 && inflate.dt <= 0.1)) throw ConfigError("inflate.dt must lie in (0, 0.1]");
  for (size_t i = 0; i < sweep.eps.size(); ++i) {
    if (!(sweep.eps[i] > 0.0)) throw ConfigError("sweep.eps entries must be positive");
    if (i > 0 && !(sweep.eps[i] < sweep.eps[i - 1])) throw ConfigError("sweep.eps must be strictly descending");
  }
  if (!(sweep.limitT > 0.0)) throw ConfigError("sweep.limit_t must be positive");
  if (experiment == Experiment::Sweep) {
    if (sweep.eps.empty()) throw ConfigError("sweep.eps must list at least one epsilon");
    if (system == System::NavierStokes) throw ConfigError("sweep members must be an Oldroyd-B system");
    for (double e : sweep.eps)
      if (tEndFor(e) < sweep.limitT) throw ConfigError("sweep: member t_end must reach sweep.limit_t");
  }
  if (experiment == Experiment::Inflate && inflate.ks.empty()) throw ConfigError("inflate.k must not be empty");
}

RunConfig parseConfig(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  RunConfig cfg;
  cfg.source = text;

  static const std::set<std::string> sections{"grid", "model", "stepper", "run", "initial",
                                              "dispersion", "inflate", "sweep"};
  Section top(&root, "");
  for (const auto& [k, v] : root) {
    const std::string key(k.str());
    if (!sections.count(key)) continue;
    if (!v.is_table()) throw ConfigError("'" + key + "' must be a table");
    top.markUsed(key);
  }
  const auto experiment = top.string("experiment");
  if (!experiment) throw ConfigError("missing top-level key 'experiment'");
  cfg.experiment = lookup<Experiment>("experiment", *experiment,
                                      {{"dispersion", Experiment::Dispersion},
                                       {"inflate", Experiment::Inflate},
                                       {"simulate", Experiment::Simulate},
                                       {"sweep", Experiment::Sweep},
                                       {"audit", Experiment::Audit}});
  top.rejectUnknown();

  Section grid(root["grid"].as_table(), "grid");
  cfg.grid.nx = checkedInt(grid.integer("nx", 64), "grid.nx");
  cfg.grid.ny = checkedInt(grid.integer("ny", cfg.grid.nx), "grid.ny");
  grid.rejectUnknown();

  Section model(root["model"].as_table(), "model");
  if (auto s = model.string("system"))
    cfg.system = lookup<System>("model.system", *s,
                                {{"euler", System::EulerOldroydB},
                                 {"voigt", System::VoigtOldroydB},
                                 {"ns", System::NavierStokes}});
  cfg.params.epsilon = model.number("epsilon", 1.0);
  cfg.params.b = model.number("b", -1.0);
  cfg.params.a = model.number("a", 0.0);
  cfg.params.voigt = cfg.system == System::VoigtOldroydB;
  model.rejectUnknown();

  Section stepper(root["stepper"].as_table(), "stepper");
  cfg.stepper.dt = stepper.number("dt", 1e-3);
  cfg.stepper.cflSafety = stepper.number("cfl_safety", 0.5);
  cfg.stepper.scheme = cfg.system == System::EulerOldroydB ? Scheme::ExplicitRk4 : Scheme::ExpIntImex;
  if (auto s = stepper.string("scheme"))
    cfg.stepper.scheme = lookup<Scheme>("stepper.scheme", *s,
                                        {{"explicit-rk4", Scheme::ExplicitRk4}, {"expint-imex", Scheme::ExpIntImex}});
  cfg.stepper.dealias = stepper.boolean("dealias", true);
  cfg.stepper.dtCapFactor = stepper.number("dt_cap_factor", 10.0);
  cfg.stepper.maxHalvings = checkedInt(stepper.integer("max_halvings", 20), "stepper.max_halvings");
  cfg.stepper.blowupAmplitude = stepper.number("blowup_amplitude", 1e8);
  stepper.rejectUnknown();

  Section run(root["run"].as_table(), "run");
  if (const toml::node* t = run.raw("t_end")) {
    if (auto s = t->value_exact<std::string>()) {
      if (*s != "auto") throw ConfigError("run.t_end: expected a number or \"auto\"");
    } else if (auto d = t->value_exact<double>()) {
      cfg.run.tEnd = *d;
    } else if (auto i = t->value_exact<std::int64_t>()) {
      cfg.run.tEnd = static_cast<double>(*i);
    } else {
      throw ConfigError("run.t_end: expected a number or \"auto\"");
    }
  } else {
    cfg.run.tEnd = 1.0;
  }
  cfg.run.diagnosticsEvery = checkedInt(run.integer("diagnostics_every", 10), "run.diagnostics_every");
  cfg.run.snapshotEvery = checkedInt(run.integer("snapshot_every", 0), "run.snapshot_every");
  cfg.run.outputDir = run.string("output_dir").value_or("");
  run.rejectUnknown();

  Section initial(root["initial"].as_table(), "initial");
  if (auto s = initial.string("generator"))
    cfg.initial.generator = lookup<Generator>("initial.generator", *s,
                                              {{"zero", Generator::Zero},
                                               {"taylor-green", Generator::TaylorGreen},
                                               {"random-smooth", Generator::RandomSmooth},
                                               {"mode-probe", Generator::ModeProbe}});
  cfg.initial.amplitude = initial.number("amplitude", 1.0);
  const std::int64_t seed = initial.integer("seed", 1);
  if (seed < 0) throw ConfigError("initial.seed must be >= 0");
  cfg.initial.seed = static_cast<std::uint64_t>(seed);
  cfg.initial.k = checkedInt(initial.integer("k", 8), "initial.k");
  cfg.initial.cutoff = checkedInt(initial.integer("cutoff", 4), "initial.cutoff");
  if (auto s = initial.string("tau"))
    cfg.initial.tau = lookup<StressInit>("initial.tau", *s,
                                         {{"well-prepared", StressInit::WellPrepared}, {"zero", StressInit::Zero}});
  initial.rejectUnknown();

  Section disp(root["dispersion"].as_table(), "dispersion");
  cfg.dispersion.kMax = checkedInt(disp.integer("k_max", 64), "dispersion.k_max");
  cfg.dispersion.dtFactor = disp.number("dt_factor", 0.05);
  cfg.dispersion.windowFactor = disp.number("window_factor", 2.0);
  disp.rejectUnknown();

  Section infl(root["inflate"].as_table(), "inflate");
  if (infl.present() && infl.raw("k")) {
    cfg.inflate.ks.clear();
    for (double k : infl.numbers("k")) {
      if (k != std::floor(k)) throw ConfigError("inflate.k entries must be integers");
      cfg.inflate.ks.push_back(static_cast<int>(k));
    }
  }
  cfg.inflate.s = infl.number("s", 3.0);
  cfg.inflate.dt = infl.number("dt", 1e-4);
  infl.rejectUnknown();

  Section sweep(root["sweep"].as_table(), "sweep");
  cfg.sweep.eps = sweep.numbers("eps");
  cfg.sweep.limitT = sweep.number("limit_t", 2.0);
  sweep.rejectUnknown();

  cfg.validate();
  return cfg;
}

RunConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parseConfig(text.str());
}

nlohmann::json RunConfig::toJson() const {
  nlohmann::json j;
  j["experiment"] = toString(experiment);
  j["grid"] = {{"nx", grid.nx}, {"ny", grid.ny}};
  j["model"] = {{"system", system == System::EulerOldroydB   ? "euler"
                           : system == System::VoigtOldroydB ? "voigt"
                                                             : "ns"},
                {"epsilon", params.epsilon},
                {"b", params.b},
                {"a", params.a},
                {"nu_limit", ModelParams::nuLimit}};
  j["stepper"] = {{"dt", stepper.dt},
                  {"cfl_safety", stepper.cflSafety},
                  {"scheme", toString(stepper.scheme)},
                  {"dealias", stepper.dealias},
                  {"dt_cap_factor", stepper.dtCapFactor},
                  {"max_halvings", stepper.maxHalvings},
                  {"blowup_amplitude", stepper.blowupAmplitude}};
  nlohmann::json run_;
  if (run.tEnd) run_["t_end"] = *run.tEnd;
  else run_["t_end"] = "auto";
  run_["diagnostics_every"] = run.diagnosticsEvery;
  run_["snapshot_every"] = run.snapshotEvery;
  run_["output_dir"] = run.outputDir;
  j["run"] = run_;
  j["initial"] = {{"generator", toString(initial.generator)},
                  {"amplitude", initial.amplitude},
                  {"seed", initial.seed},
                  {"k", initial.k},
                  {"cutoff", initial.cutoff},
                  {"tau", initial.tau == StressInit::WellPrepared ? "well-prepared" : "zero"}};
  j["dispersion"] = {{"k_max", dispersion.kMax},
                     {"dt_factor", dispersion.dtFactor},
                     {"window_factor", dispersion.windowFactor}};
  j["inflate"] = {{"k", inflate.ks}, {"s", inflate.s}, {"dt", inflate.dt}};
  j["sweep"] = {{"eps", sweep.eps}, {"limit_t", sweep.limitT}};
  return j;
}

SimState initialState(const RunConfig& cfg, System system, const ModelParams& params) {
  const Grid& g = cfg.grid;
  const InitialSpec& ic = cfg.initial;
  // Navier-Stokes states carry no stress.
  const StressInit tau = system == System::NavierStokes ? StressInit::Zero : ic.tau;
  switch (ic.generator) {
    case Generator::Zero: return SimState(g, params);
    case Generator::ModeProbe: {
      SimState s = modeProbe(g, ic.k, params, ic.amplitude);
      if (system == System::NavierStokes) s.tau.setZero();
      return s;
    }
    case Generator::TaylorGreen: return withStress(taylorGreen(g, ic.amplitude), params, tau);
    case Generator::RandomSmooth: return withStress(randomSmooth(g, ic.amplitude, ic.seed, ic.cutoff), params, tau);
  }
  throw ConfigError("unknown initial-condition generator");
}

} // namespace ovlab
