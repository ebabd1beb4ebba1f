#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "ovlab/experiments/commands.hpp"

namespace ovlab {

namespace fs = std::filesystem;

namespace {

bool close(double a, double b, double rel, double floor = 0.0) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b)}) + floor;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

nlohmann::json readManifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("no manifest.json in " + dir.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("unreadable manifest in " + dir.string() + ": " + e.what());
  }
}

struct Snapshot {
  double t;
  fs::path path;
};

class Auditor {
public:
  Auditor(AuditReport& report, std::string prefix) : report_(report), prefix_(std::move(prefix)) {}

  void check(const std::string& name, bool pass, const std::string& detail) {
    report_.checks.push_back({prefix_ + name, pass, detail});
  }

  /// Returns false when any listed file is missing or altered.
  bool checksums(const fs::path& dir, const nlohmann::json& manifest, std::set<std::string>& listed) {
    int bad = 0;
    std::string first;
    for (const auto& f : manifest.at("files")) {
      const std::string rel = f.at("path");
      listed.insert(rel);
      const fs::path p = dir / rel;
      const bool ok = fs::is_regular_file(p) && sha256File(p) == f.at("sha256").get<std::string>();
      if (!ok && bad++ == 0) first = rel;
    }
    check("checksums", bad == 0,
          bad == 0 ? std::to_string(listed.size()) + " files match" : std::to_string(bad) + " mismatched, e.g. " + first);
    if (bad) report_.checksumFailure = true;
    return bad == 0;
  }

  void completeness(const fs::path& dir, const std::set<std::string>& listed, const std::set<std::string>& members) {
    std::vector<std::string> extra;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel = fs::relative(entry.path(), dir).generic_string();
      if (rel == "manifest.json" || listed.count(rel)) continue;
      const std::string head = rel.substr(0, rel.find('/'));
      if (members.count(head)) continue;  // covered by the member's own manifest
      extra.push_back(rel);
    }
    check("manifest-complete", extra.empty(),
          extra.empty() ? "every file is listed" : std::to_string(extra.size()) + " unlisted, e.g. " + extra.front());
  }

  void runContents(const fs::path& dir, const nlohmann::json& manifest) {
    const bool hasDiagnostics = fs::exists(dir / "diagnostics.csv");
    if (!hasDiagnostics) {
      for (const char* table : {"dispersion.csv", "inflation.csv", "sweep_summary.csv"})
        if (fs::exists(dir / table)) {
          const CsvTable t = readCsv(dir / table);
          check("table-readable", !t.rows.empty(), std::string(table) + ": " + std::to_string(t.rows.size()) + " rows");
        }
      return;
    }

    ModelParams params;
    params.epsilon = manifest.value("epsilon", 1.0);
    const CsvTable diag = readCsv(dir / "diagnostics.csv");
    std::vector<Snapshot> snaps;
    for (const auto& f : manifest.at("files"))
      if (f.value("kind", "") == "snapshot") snaps.push_back({f.at("t").get<double>(), dir / f.at("path").get<std::string>()});

    structural(snaps, params);
    ledgerReplay(diag);
    snapshotDensities(diag, snaps, params);
    cadence(diag, snaps, params);
  }

private:
  void structural(const std::vector<Snapshot>& snaps, const ModelParams& params) {
    double worstDiv = 0, worstMean = 0, worstHerm = 0, worstAlias = 0;
    bool finite = true, shapes = true;
    for (const auto& sn : snaps) {
      const Fld1 f = readFld1(sn.path);
      for (const auto& c : f.components) finite = finite && c.allFinite();
      shapes = shapes && (f.components.size() == 5 || f.components.size() == 2);
      if (!finite || !shapes) continue;
      const SimState s = stateOf(f, params);
      const Real norm = sobolevNorm(s.u, 0.0);
      const Real scale = std::max<Real>(1.0, norm);
      worstDiv = std::max(worstDiv, divergence(s.u)[0].abs().maxCoeff() / std::max<Real>(norm, 1e-300));
      worstMean = std::max(worstMean, std::max(std::abs(s.u.mode(0, 0, 0)), std::abs(s.u.mode(1, 0, 0))) / scale);
      worstHerm = std::max(worstHerm, std::max(hermitianDefect(s.u), hermitianDefect(s.tau)) / scale);
      const auto& w = wavenumbers(s.grid());
      for (int c = 0; c < 2; ++c) worstAlias = std::max(worstAlias, ((1.0 - w.dealias) * s.u[c].abs()).maxCoeff() / scale);
      for (int c = 0; c < 3; ++c) worstAlias = std::max(worstAlias, ((1.0 - w.dealias) * s.tau[c].abs()).maxCoeff() / scale);
    }
    const std::string n = std::to_string(snaps.size()) + " snapshots";
    check("finite", finite, n);
    check("symmetric-stress", shapes, "stress stored as (11, 12, 22); " + n);
    if (!finite || !shapes) return;
    check("divergence-free", worstDiv < 1e-10, "max |k.u_k| / |u| = " + sci(worstDiv));
    check("mean-zero", worstMean < 1e-13, "max |u_(0,0)| = " + sci(worstMean));
    check("hermitian", worstHerm < 1e-12, "max defect = " + sci(worstHerm));
    check("dealiased", worstAlias < 1e-12, "max truncated coefficient = " + sci(worstAlias));
  }

  void ledgerReplay(const CsvTable& diag) {
    const int t = diag.column("t");
    const int dls = diag.column("dens_low_sup"), dli = diag.column("dens_low_int");
    const int dhs = diag.column("dens_high_sup"), dhi = diag.column("dens_high_int");
    EnergyLedger ledger;
    bool ok = true;
    double worst = 0;
    for (const auto& row : diag.rows) {
      EnergyDensities d{row[dls], row[dli], row[dhs], row[dhi]};
      const EnergySample& s = ledger.record(row[t], d);
      const double stored[] = {row[diag.column("sup_low")], row[diag.column("int_low")],
                               row[diag.column("sup_high")], row[diag.column("int_high")],
                               row[diag.column("E_total")]};
      const double mine[] = {s.supLow, s.intLow, s.supHigh, s.intHigh, s.eTotal()};
      for (int i = 0; i < 5; ++i) {
        ok = ok && close(stored[i], mine[i], 1e-9);
        if (stored[i] != 0) worst = std::max(worst, std::abs(stored[i] - mine[i]) / std::abs(stored[i]));
      }
    }
    check("ledger-replay", ok, std::to_string(diag.rows.size()) + " rows, max rel diff " + sci(worst));
  }

  void snapshotDensities(const CsvTable& diag, const std::vector<Snapshot>& snaps, const ModelParams& params) {
    const int t = diag.column("t");
    const char* cols[] = {"dens_low_sup", "dens_low_int", "dens_high_sup", "dens_high_int"};
    int matched = 0;
    bool ok = true;
    double worst = 0;
    for (const auto& sn : snaps) {
      const auto row = std::find_if(diag.rows.begin(), diag.rows.end(), [&](const auto& r) {
        return std::abs(r[t] - sn.t) <= 1e-12 * std::max(1.0, std::abs(sn.t));
      });
      if (row == diag.rows.end()) continue;
      const SimState s = stateOf(readFld1(sn.path), params);
      const EnergyDensities d = energyDensities(s.u, s.tau, params.epsilon);
      const double mine[] = {d.lowSup, d.lowInt, d.highSup, d.highInt};
      const double total = d.lowSup + d.lowInt + d.highSup + d.highInt;
      for (int i = 0; i < 4; ++i) {
        const double stored = (*row)[diag.column(cols[i])];
        ok = ok && close(stored, mine[i], 1e-9, 1e-12 * total);
        if (stored != 0) worst = std::max(worst, std::abs(stored - mine[i]) / std::abs(stored));
      }
      ++matched;
    }
    check("snapshot-ledger", ok, std::to_string(matched) + " snapshots matched, max rel diff " + sci(worst));
  }

  void cadence(const CsvTable& diag, const std::vector<Snapshot>& snaps, const ModelParams& params) {
    if (snaps.size() < 2 || diag.rows.empty()) {
      check("cadence-consistency", true, "skipped: fewer than 2 snapshots");
      return;
    }
    EnergyLedger coarse;
    for (const auto& sn : snaps) {
      const SimState s = stateOf(readFld1(sn.path), params);
      coarse.record(sn.t, s.u, s.tau, params.epsilon);
    }
    const double fine = diag.rows.back()[diag.column("E_total")];
    const double gap = fine == 0 ? std::abs(coarse.eTotal()) : std::abs(coarse.eTotal() - fine) / std::abs(fine);
    check("cadence-consistency", gap < 0.05, "E_total coarse vs fine relative gap " + sci(gap));
  }

  AuditReport& report_;
  std::string prefix_;
};

void auditDir(const fs::path& dir, AuditReport& report, const std::string& prefix) {
  const nlohmann::json manifest = readManifest(dir);
  Auditor a(report, prefix);
  std::set<std::string> listed;
  std::set<std::string> members;
  if (manifest.contains("members"))
    for (const auto& m : manifest.at("members")) members.insert(m.get<std::string>());
  if (!a.checksums(dir, manifest, listed)) return;
  a.completeness(dir, listed, members);
  a.runContents(dir, manifest);
  for (const auto& m : members) auditDir(dir / m, report, prefix + m + "/");
}

} // namespace

int AuditReport::exitCode() const {
  if (checksumFailure) return kExitChecksum;
  for (const auto& c : checks)
    if (!c.pass) return kExitInvariantFailed;
  return kExitOk;
}

AuditReport audit(const fs::path& runDir) {
  AuditReport report;
  auditDir(runDir, report, "");
  return report;
}

int cmdAudit(const fs::path& runDir, std::ostream& out) {
  const AuditReport report = audit(runDir);
  for (const auto& c : report.checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  const int code = report.exitCode();
  out << (code == kExitOk ? "audit: all checks passed" : "audit: FAILED") << '\n';
  return code;
}

} // namespace ovlab
