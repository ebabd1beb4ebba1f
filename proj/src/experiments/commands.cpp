#include "ovlab/experiments/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "run_directory.hpp"

namespace ovlab {

namespace fs = std::filesystem;

namespace {

std::mutex logMutex;

void note(const std::string& line) {
  std::lock_guard lock(logMutex);
  std::cerr << "ovlab: " << line << '\n';
}

std::string csvLine(std::initializer_list<double> values) {
  std::string line;
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += formatDouble(v);
  }
  return line + '\n';
}

void writeText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string snapshotName(long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshots/snap_%08ld.fld", step);
  return buf;
}

/// One integration with a full run directory: diagnostics.csv, snapshots, manifest.
struct MemberRun {
  SimulateResult result;
  std::vector<TrajectorySample> trajectory;  // samples with t <= keepUntil
};

MemberRun integrate(const RunConfig& cfg, System system, const ModelParams& params, double tEnd, RunDirectory& dir,
                    double keepUntil = -1.0) {
  MemberRun out;
  const SimState initial = initialState(cfg, system, params);
  const bool withStress = system != System::NavierStokes;

  std::ofstream csv(dir.path("diagnostics.csv"), std::ios::binary | std::ios::trunc);
  if (!csv) throw IoError("cannot create " + dir.path("diagnostics.csv").string());
  for (size_t i = 0; i < diagnosticsColumns().size(); ++i) csv << (i ? "," : "") << diagnosticsColumns()[i];
  csv << '\n';

  nlohmann::json snapshots = nlohmann::json::array();
  if (cfg.run.snapshotEvery > 0) fs::create_directories(dir.path("snapshots"));

  RunHooks hooks;
  hooks.diagnosticsEvery = cfg.run.diagnosticsEvery;
  hooks.snapshotEvery = cfg.run.snapshotEvery;
  hooks.onDiagnostics = [&](const SimState& s, const EnergySample& sample) {
    csv << diagnosticsRow(sample) << '\n';
    if (s.t <= keepUntil + 1e-9 * std::max(1.0, keepUntil)) out.trajectory.push_back({s.t, s.u, s.tau});
  };
  hooks.onSnapshot = [&](const SimState& s) {
    const std::string rel = snapshotName(s.stepCount);
    writeFld1(dir.path(rel), snapshotOf(s, withStress));
    dir.addFile(rel, {{"kind", "snapshot"}, {"t", s.t}, {"step", s.stepCount}});
  };

  const RunSummary summary = run(initial, system, cfg.stepper, tEnd, hooks);
  csv.close();
  if (!csv) throw IoError("write failed for " + dir.path("diagnostics.csv").string());
  dir.addFile("diagnostics.csv", {{"kind", "diagnostics"}});

  out.result.tEnd = tEnd;
  out.result.blownUp = summary.blownUp;
  out.result.blowUpTime = summary.blowUpTime;
  out.result.blowUpReason = summary.blowUpReason;
  out.result.steps = summary.steps;
  out.result.last = summary.ledger.samples().back();
  return out;
}

nlohmann::json runFacts(const SimulateResult& r, System system, const ModelParams& params, std::uint64_t seed) {
  nlohmann::json j;
  j["system"] = toString(system);
  j["epsilon"] = params.epsilon;
  j["seed"] = seed;
  j["t_end"] = r.tEnd;
  j["steps"] = r.steps;
  j["E_total_end"] = r.last.eTotal();
  j["blow_up"] = r.blownUp ? nlohmann::json{{"time", r.blowUpTime}, {"reason", r.blowUpReason}} : nlohmann::json();
  j["status"] = r.blownUp ? "blow-up" : "ok";
  return j;
}

} // namespace

std::string memberDirName(double epsilon) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "eps_%g", epsilon);
  return buf;
}

std::vector<DispersionRow> dispersionTable(const DispersionSpec& spec, double a, double b) {
  std::vector<DispersionRow> rows;
  for (int k = 1; k <= spec.kMax; ++k) {
    const DispersionResult d = dispersion(k, a, b);
    DispersionRow r;
    r.k = k;
    r.lambdaPlus = d.lambdaPlus;
    r.lambdaMinus = d.lambdaMinus;
    r.slope = d.lambdaPlus.real() / k;

    const double re = d.lambdaPlus.real();
    const double mag = std::abs(d.lambdaPlus);
    const double dt = spec.dtFactor / (mag > 1e-12 ? mag : 1.0);
    const double window = spec.windowFactor / (std::abs(re) > 1e-12 ? std::abs(re) : 1.0);
    r.stepperRate = fittedGrowthRate(eigenModeState(d), k, a, b, dt, window);
    r.relErr = std::abs(r.stepperRate - re) / (std::abs(re) > 1e-12 ? std::abs(re) : 1.0);
    rows.push_back(r);
  }
  return rows;
}

std::vector<InflationRow> inflationTable(const InflateSpec& spec) {
  std::vector<InflationRow> rows;
  for (int k : spec.ks) {
    const InflationTrace tr = inflationOde(k, spec.s, spec.dt);
    InflationRow r;
    r.k = k;
    r.s = spec.s;
    r.alphaAtOne = tr.alpha.back();
    r.lowerBound = tr.lowerBound();
    r.ratio = tr.normProxy() / tr.lowerBound();
    r.margin = tr.comparisonMargin();
    rows.push_back(r);
  }
  return rows;
}

int cmdDispersion(const RunConfig& cfg, const fs::path& out, std::vector<DispersionRow>* rowsOut) {
  RunDirectory dir(out, cfg);
  const auto rows = dispersionTable(cfg.dispersion, cfg.params.a, cfg.params.b);
  std::string text = "k,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus,slope,stepper_rate,rel_err\n";
  for (const auto& r : rows)
    text += csvLine({double(r.k), r.lambdaPlus.real(), r.lambdaPlus.imag(), r.lambdaMinus.real(),
                     r.lambdaMinus.imag(), r.slope, r.stepperRate, r.relErr});
  writeText(dir.path("dispersion.csv"), text);
  dir.addFile("dispersion.csv", {{"kind", "table"}});
  dir.finish(kExitOk, {{"status", "ok"}});
  if (rowsOut) *rowsOut = rows;
  return kExitOk;
}

int cmdInflate(const RunConfig& cfg, const fs::path& out, std::vector<InflationRow>* rowsOut) {
  RunDirectory dir(out, cfg);
  std::vector<InflationRow> rows;
  try {
    rows = inflationTable(cfg.inflate);
  } catch (const NumericalError& e) {
    note(std::string("integrator failure: ") + e.what());
    dir.finish(kExitIntegrator, {{"status", "integrator-failure"}, {"error", e.what()}});
    return kExitIntegrator;
  }
  std::string text = "k,s,alpha_1,lower_bound,ratio,comparison_margin\n";
  for (const auto& r : rows) text += csvLine({double(r.k), r.s, r.alphaAtOne, r.lowerBound, r.ratio, r.margin});
  writeText(dir.path("inflation.csv"), text);
  dir.addFile("inflation.csv", {{"kind", "table"}});
  dir.finish(kExitOk, {{"status", "ok"}});
  if (rowsOut) *rowsOut = rows;
  return kExitOk;
}

int cmdSimulate(const RunConfig& cfg, const fs::path& out, SimulateResult* resultOut) {
  RunDirectory dir(out, cfg);
  const double tEnd = cfg.tEndFor(cfg.params.epsilon);
  const MemberRun m = integrate(cfg, cfg.system, cfg.params, tEnd, dir);
  const int code = m.result.blownUp ? kExitBlowUp : kExitOk;
  if (m.result.blownUp)
    note("blow-up at t = " + formatDouble(m.result.blowUpTime) + ": " + m.result.blowUpReason);
  dir.finish(code, runFacts(m.result, cfg.system, cfg.params, cfg.initial.seed));
  if (resultOut) *resultOut = m.result;
  return code;
}

int cmdSweep(const RunConfig& cfg, const fs::path& out, int threads, SweepResult* resultOut) {
  RunDirectory dir(out, cfg);
  const size_t n = cfg.sweep.eps.size();
  const double limitT = cfg.sweep.limitT;

  // Task i < n is member i; task n is the Navier-Stokes reference.
  std::vector<MemberRun> runs(n + 1);
  std::vector<std::string> errors(n + 1);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i <= n; i = next++) {
      try {
        ModelParams p = cfg.params;
        System system = cfg.system;
        std::string name = "ns_reference";
        double tEnd = limitT;
        if (i < n) {
          p.epsilon = cfg.sweep.eps[i];
          name = memberDirName(p.epsilon);
          tEnd = cfg.tEndFor(p.epsilon);
        } else {
          system = System::NavierStokes;
        }
        RunDirectory member(dir.path(name), cfg);
        runs[i] = integrate(cfg, system, p, tEnd, member, limitT);
        member.finish(runs[i].result.blownUp ? kExitBlowUp : kExitOk,
                      runFacts(runs[i].result, system, p, cfg.initial.seed));
        note("sweep member " + name + " done (t_end " + formatDouble(tEnd) + ")");
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int workers = std::clamp(threads, 1, static_cast<int>(n + 1));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw IoError("sweep member failed: " + e);

  SweepResult res;
  const auto& reference = runs[n].trajectory;
  std::string text =
      "eps,t_end,sup_H2_gap,sup_H5_gap,L2t_H2_sigma,E_total_end,blown_up,slope_sup_H2_gap,slope_L2t_H2_sigma,"
      "uniform_ratio\n";
  std::vector<double> eps, gaps, sigmas;
  double eMax = 0, eMin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    SweepMember m;
    m.epsilon = cfg.sweep.eps[i];
    m.tEnd = runs[i].result.tEnd;
    m.blownUp = runs[i].result.blownUp;
    m.eTotalEnd = runs[i].result.last.eTotal();
    res.anyBlowUp = res.anyBlowUp || m.blownUp || runs[n].result.blownUp;
    if (!m.blownUp && !runs[n].result.blownUp) m.metrics = limitMetrics(runs[i].trajectory, reference);
    eps.push_back(m.epsilon);
    gaps.push_back(m.metrics.supH2Gap);
    sigmas.push_back(m.metrics.l2tH2Sigma);
    eMax = std::max(eMax, m.eTotalEnd);
    eMin = std::min(eMin, m.eTotalEnd);
    res.members.push_back(m);
  }
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.slopeSupH2Gap = n >= 2 && positive(gaps) ? logLogSlope(eps, gaps) : nan;
  res.slopeL2tSigma = n >= 2 && positive(sigmas) ? logLogSlope(eps, sigmas) : nan;
  res.uniformRatio = eMin > 0 ? eMax / eMin : nan;
  for (const auto& m : res.members)
    text += csvLine({m.epsilon, m.tEnd, m.metrics.supH2Gap, m.metrics.supH5Gap, m.metrics.l2tH2Sigma, m.eTotalEnd,
                     m.blownUp ? 1.0 : 0.0, res.slopeSupH2Gap, res.slopeL2tSigma, res.uniformRatio});
  writeText(dir.path("sweep_summary.csv"), text);
  dir.addFile("sweep_summary.csv", {{"kind", "summary"}});

  nlohmann::json members = nlohmann::json::array();
  for (size_t i = 0; i <= n; ++i) {
    const std::string name = i < n ? memberDirName(cfg.sweep.eps[i]) : "ns_reference";
    members.push_back(name);
    dir.addFile(name + "/manifest.json", {{"kind", "member-manifest"}});
  }
  const int code = res.anyBlowUp ? kExitBlowUp : kExitOk;
  dir.finish(code, {{"status", res.anyBlowUp ? "blow-up" : "ok"},
                    {"members", members},
                    {"seed", cfg.initial.seed},
                    {"limit_t", limitT},
                    {"uniform_bound", {{"ratio", res.uniformRatio}, {"within_2x", res.uniformRatio <= 2.0}}}});
  if (resultOut) *resultOut = res;
  return code;
}

} // namespace ovlab
