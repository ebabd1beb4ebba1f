#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ovlab/solvers.hpp"

namespace ovlab {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// FLD1 snapshot: 32-byte header laid out as the naturally aligned C struct
/// {char magic[4] = "FLD1"; u32 nx, ny, ncomp, dtype = 1 (float64); u64 reserved = 0},
/// i.e. 4 padding bytes at offset 20 and reserved at offset 24. Then, per
/// component, ny rows of nx little-endian float64 values, x fastest.
struct Fld1 {
  Grid grid;
  std::vector<RealBlock> components;
};

void writeFld1(const std::filesystem::path& path, const Fld1& data);
Fld1 readFld1(const std::filesystem::path& path);

/// Physical components (u1, u2, tau11, tau12, tau22), or (u1, u2) without stress.
Fld1 snapshotOf(const SimState& s, bool withStress);
/// Inverse of snapshotOf: spectral velocity and stress (zero if absent).
SimState stateOf(const Fld1& snap, const ModelParams& params);

std::string sha256File(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory and an atomic rename.
void writeFileAtomic(const std::filesystem::path& path, const std::string& contents);

/// %.17g, which round-trips every double.
std::string formatDouble(double v);

/// Fixed column order of diagnostics.csv.
const std::vector<std::string>& diagnosticsColumns();
std::string diagnosticsRow(const EnergySample& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;  // throws IoError when absent
};

CsvTable readCsv(const std::filesystem::path& path);

} // namespace ovlab
