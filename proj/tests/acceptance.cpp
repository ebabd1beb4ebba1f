// Acceptance gate: `acceptance N` checks criterion N (1..10), `acceptance all` runs every one.
// Prints one "criterion N: PASS|FAIL detail" line per criterion; exit status 0 iff all checked pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "ovlab/experiments/commands.hpp"
#include "ovlab/initial.hpp"

using namespace ovlab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path workDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ovlab-acceptance-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

double lsSlope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double closedFormLambda(int k) { return (-1.0 + std::sqrt(1.0 + 6.0 * k * k)) / 2.0; }

Verdict criterion1() {
  double worst = 0;
  for (int k = 1; k <= 64; ++k) {
    const double exact = closedFormLambda(k);
    worst = std::max(worst, std::abs(dispersion(k, -2.0, -1.0).lambdaPlus - exact) / exact);
  }
  const double l2 = dispersion(2, -2.0, -1.0).lambdaPlus.real();
  return {worst < 1e-12 && std::abs(l2 - 2.0) < 1e-12,
          fmt("max rel err k=1..64 %.3e (< 1e-12), lambda_+(2) = %.17g", worst, l2)};
}

Verdict criterion2() {
  bool ok = true;
  std::string detail;
  for (int k : {1, 2, 4, 8}) {
    const DispersionResult d = dispersion(k, -2.0, -1.0);
    const double lambda = d.lambdaPlus.real();
    const double rate = fittedGrowthRate(eigenModeState(d), k, -2.0, -1.0, 0.05 / lambda, 2.0 / lambda);
    const double rel = std::abs(rate - lambda) / lambda;
    ok = ok && rel < 0.01;
    detail += fmt("k=%d rel err %.2e; ", k, rel);
  }
  return {ok, detail + "(< 1e-2)"};
}

/// Early-time growth rate of mode k from a probe seeded on its dominant eigenvector.
double probeRate(int k, bool voigt) {
  const Grid g(128, 128);
  ModelParams p;
  p.epsilon = 1.0;
  p.b = -1.0;
  p.a = -2.0;
  p.voigt = voigt;
  SimState s = modeProbe(g, k, p, 1e-6);
  StepperConfig c;
  c.dt = 1e-4;
  c.scheme = voigt ? Scheme::ExpIntImex : Scheme::ExplicitRk4;
  const System sys = voigt ? System::VoigtOldroydB : System::EulerOldroydB;
  std::vector<double> t{s.t}, logA{std::log(probeAmplitude(s, k))};
  while (s.t < 0.02 - 1e-12) {
    const StepResult r = step(sys, s, c);
    if (r.status != StepStatus::Advanced) throw NumericalError("probe blew up: " + r.reason);
    t.push_back(s.t);
    logA.push_back(std::log(probeAmplitude(s, k)));
  }
  return lsSlope(t, logA);
}

Verdict criterion3() {
  bool ok = true;
  std::string detail;
  std::vector<double> ks, rates;
  for (int k : {2, 4, 8}) {
    const double rate = probeRate(k, false);
    const double rel = std::abs(rate - closedFormLambda(k)) / closedFormLambda(k);
    ok = ok && rel < 0.05;
    ks.push_back(k);
    rates.push_back(rate);
    detail += fmt("k=%d rate %.4f (lambda_+ %.4f, rel %.2e); ", k, rate, closedFormLambda(k), rel);
  }
  const double slope = lsSlope(ks, rates);
  const double target = std::sqrt(6.0) / 2.0;
  const double rel = std::abs(slope - target) / target;
  ok = ok && rel < 0.15 && rates[0] < rates[1] && rates[1] < rates[2];
  return {ok, detail + fmt("slope %.4f vs sqrt(6)/2, rel %.2e (< 0.15)", slope, rel)};
}

Verdict criterion4() {
  const double r4 = probeRate(4, true);
  const double r16 = probeRate(16, true);
  return {r16 <= 2.0 * r4, fmt("Voigt rate k=4 %.4f, k=16 %.4f, ratio %.3f (<= 2)", r4, r16, r16 / r4)};
}

Verdict criterion5() {
  bool ok = true;
  std::string detail;
  double proxy16 = 0;
  for (int k : {2, 4, 8, 16}) {
    const InflationTrace tr = inflationOde(k, 3.0);
    const double margin = tr.comparisonMargin();
    ok = ok && margin >= -1e-9 && tr.normProxy() >= tr.lowerBound();
    if (k == 16) proxy16 = tr.normProxy();
    detail += fmt("k=%d margin %.2e proxy/bound %.4f; ", k, margin, tr.normProxy() / tr.lowerBound());
  }
  ok = ok && proxy16 > 1e8;
  return {ok, detail + fmt("k=16 proxy %.3e (> 1e8)", proxy16)};
}

Verdict criterion6() {
  const Grid g(32, 32);
  double worstStress = 0;
  for (double eps : {1.0, 0.1, 0.02}) {
    ModelParams p;
    p.epsilon = eps;
    p.voigt = true;
    SimState s(g, p);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k2 = -10; k2 <= 10; ++k2)
      for (int k1 = 0; k1 <= 10; ++k1) {
        if (k1 == 0 && k2 <= 0) continue;
        for (int c = 0; c < 3; ++c) {
          const Complex v(uni(rng), uni(rng));
          s.tau.mode(c, k1, k2) = v;
          s.tau.mode(c, -k1, -k2) = std::conj(v);
        }
      }
    const SimState init = s;
    StepperConfig c;
    c.dt = eps * eps / 7.0;
    c.freezeVelocity = true;
    const double tEnd = 2.0 * eps * eps;
    const RunSummary r = run(s, System::VoigtOldroydB, c, tEnd);
    for (int k2 = -10; k2 <= 10; ++k2)
      for (int k1 = -10; k1 <= 10; ++k1) {
        if (k1 == 0 && k2 == 0) continue;
        const double rate = 1.0 / (eps * eps * (1.0 + k1 * k1 + k2 * k2));
        for (int comp = 0; comp < 3; ++comp) {
          const Complex expect = init.tau.mode(comp, k1, k2) * std::exp(-rate * tEnd);
          worstStress = std::max(worstStress, std::abs(r.final.tau.mode(comp, k1, k2) - expect) / std::abs(expect));
        }
      }
  }

  const Grid g64(64, 64);
  ModelParams ns;
  SimState v(g64, ns);
  v.u = taylorGreen(g64, 1.0);
  const VelocityField v0 = v.u;
  StepperConfig c;
  c.dt = 1e-3;
  const RunSummary r = run(v, System::NavierStokes, c, 1.0);
  const auto got = inverseTransform(r.final.u);
  const auto want = inverseTransform(v0);
  double worstTg = 0;
  for (int comp = 0; comp < 2; ++comp)
    worstTg = std::max(worstTg, (got[comp] - std::exp(-1.0) * want[comp]).abs().maxCoeff());
  return {worstStress < 1e-8 && worstTg < 1e-6,
          fmt("frozen-u stress max per-mode rel err %.2e (< 1e-8); Taylor-Green max err at t=1 %.2e (< 1e-6)",
              worstStress, worstTg)};
}

const char* kUniformSweep = R"(
experiment = "sweep"
[grid]
nx = 64
ny = 64
[model]
system = "voigt"
[stepper]
dt = 1e-3
[run]
t_end = "auto"
diagnostics_every = 20
snapshot_every = 1000
[initial]
generator = "random-smooth"
amplitude = 1.0
seed = 1
[sweep]
eps = [0.1, 0.05, 0.025]
limit_t = 1.0
)";

const char* kLimitSweep = R"(
experiment = "sweep"
[grid]
nx = 64
ny = 64
[model]
system = "voigt"
[stepper]
dt = 1e-3
[run]
t_end = 2.0
diagnostics_every = 20
snapshot_every = 500
[initial]
generator = "taylor-green"
amplitude = 1.0
tau = "well-prepared"
[sweep]
eps = [0.2, 0.1, 0.05]
limit_t = 2.0
)";

int threads() { return std::max(1u, std::thread::hardware_concurrency()); }

Verdict criterion7() {
  SweepResult res;
  const int code = cmdSweep(parseConfig(kUniformSweep), workDir("uniform"), threads(), &res);
  std::string detail = fmt("exit %d; E_total(t_end):", code);
  for (const auto& m : res.members) detail += fmt(" eps=%g t_end=%.4f E=%.6g;", m.epsilon, m.tEnd, m.eTotalEnd);
  detail += fmt(" max/min %.4f (<= 2), blow-up %s", res.uniformRatio, res.anyBlowUp ? "yes" : "no");
  return {code == kExitOk && !res.anyBlowUp && res.uniformRatio <= 2.0, detail};
}

Verdict criterion8() {
  SweepResult res;
  const int code = cmdSweep(parseConfig(kLimitSweep), workDir("limit"), threads(), &res);
  if (code != kExitOk || res.members.size() != 3) return {false, fmt("sweep exit %d", code)};
  const auto& m = res.members;
  const bool a = m[0].metrics.supH2Gap > m[1].metrics.supH2Gap && m[1].metrics.supH2Gap > m[2].metrics.supH2Gap;
  const bool b = res.slopeL2tSigma >= 0.7 && res.slopeL2tSigma <= 1.3;
  return {a && b, fmt("(a) %s sup H2 gap %.4g > %.4g > %.4g; (b) %s L2(0,T;H2) |tau - D(u)| = %.4g, %.4g, %.4g, "
                      "log-log slope %.4f (required in [0.7, 1.3])",
                      a ? "PASS" : "FAIL", m[0].metrics.supH2Gap, m[1].metrics.supH2Gap, m[2].metrics.supH2Gap,
                      b ? "PASS" : "FAIL", m[0].metrics.l2tH2Sigma, m[1].metrics.l2tH2Sigma,
                      m[2].metrics.l2tH2Sigma, res.slopeL2tSigma)};
}

Verdict criterion9() {
  const Grid g(64, 64);
  ModelParams p;
  p.epsilon = 0.1;
  p.voigt = true;
  SimState s = withStress(randomSmooth(g, 1.0, 1), p, StressInit::Zero);
  StepperConfig c;
  c.dt = 1e-3;
  const auto& w = wavenumbers(g);
  double worstMean = 0, worstDiv = 0, worstHerm = 0, worstAlias = 0;
  bool finite = true;
  for (int n = 0; n < 10000; ++n) {
    if (step(System::VoigtOldroydB, s, c).status != StepStatus::Advanced) return {false, fmt("blow-up at step %d", n)};
    finite = finite && s.u.allFinite() && s.tau.allFinite();
    worstMean = std::max({worstMean, std::abs(s.u.mode(0, 0, 0)), std::abs(s.u.mode(1, 0, 0))});
    worstDiv = std::max(worstDiv, divergence(s.u)[0].abs().maxCoeff() / sobolevNorm(s.u, 0.0));
    const double scale = std::max(1.0, std::sqrt(s.u.squaredAmplitude() + s.tau.squaredAmplitude()));
    worstHerm = std::max(worstHerm, std::max(hermitianDefect(s.u), hermitianDefect(s.tau)) / scale);
    for (int k = 0; k < 2; ++k) worstAlias = std::max(worstAlias, ((1.0 - w.dealias) * s.u[k].abs()).maxCoeff());
    for (int k = 0; k < 3; ++k) worstAlias = std::max(worstAlias, ((1.0 - w.dealias) * s.tau[k].abs()).maxCoeff());
  }
  // Symmetry is structural: tau is stored as (11, 12, 22) and tau21 is tau12 by construction.
  const bool ok = finite && worstMean < 1e-13 && worstDiv < 1e-10 && worstHerm < 1e-12 && worstAlias == 0.0;
  return {ok, fmt("10^4 steps to t=%.3f: max |u_(0,0)| %.2e (< 1e-13), max |k.u_k|/|u| %.2e (< 1e-10), "
                  "Hermitian defect %.2e (< 1e-12), max truncated coefficient %.1e (== 0), symmetric by storage",
                  s.t, worstMean, worstDiv, worstHerm, worstAlias)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion10() {
  const RunConfig cfg = parseConfig(kLimitSweep);
  const fs::path a = workDir("det-a"), b = workDir("det-b");
  const int many = std::max(4, threads());
  const int ca = cmdSweep(cfg, a, many, nullptr);
  const int cb = cmdSweep(cfg, b, 1, nullptr);
  size_t csvs = 0, snaps = 0;
  bool same = ca == kExitOk && cb == kExitOk;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    if (e.path().extension() == ".csv") {
      ++csvs;
      same = same && slurp(e.path()) == slurp(b / rel);
    } else if (e.path().extension() == ".fld") {
      ++snaps;
      same = same && sha256File(e.path()) == sha256File(b / rel);
    }
  }
  return {same && csvs > 0 && snaps > 0,
          fmt("%zu CSVs byte-identical and %zu snapshot SHA-256 sums equal across runs with %d and 1 threads: %s", csvs,
              snaps, many, same ? "yes" : "no")};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <1..10 | all>\n", argv[0]);
    return 2;
  }
  std::vector<int> which;
  if (std::string(argv[1]) == "all") {
    for (int i = 1; i <= 10; ++i) which.push_back(i);
  } else {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "criterion must be 1..10 or all\n");
      return 2;
    }
    which.push_back(n);
  }

  bool all = true;
  for (int n : which) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[n - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s %s [%.1f s]\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  fs::remove_all(fs::temp_directory_path() / ("ovlab-acceptance-" + std::to_string(::getpid())));
  return all ? 0 : 1;
}
