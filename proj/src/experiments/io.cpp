#include "ovlab/experiments/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace ovlab {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "FLD1 I/O assumes a little-endian host");

namespace {

constexpr std::uint32_t kDtypeFloat64 = 1;

template <typename T>
void put(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

template <typename T>
T get(const std::string& buf, size_t offset) {
  T v;
  std::memcpy(&v, buf.data() + offset, sizeof(T));
  return v;
}

std::string readAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return ss.str();
}

} // namespace

void writeFld1(const fs::path& path, const Fld1& data) {
  const Grid& g = data.grid;
  std::string buf;
  buf.reserve(32 + data.components.size() * g.points() * sizeof(double));
  buf.append("FLD1", 4);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(data.components.size()));
  put<std::uint32_t>(buf, kDtypeFloat64);
  put<std::uint32_t>(buf, 0);  // alignment padding
  put<std::uint64_t>(buf, 0);
  for (const RealBlock& c : data.components) {
    if (c.rows() != g.nx || c.cols() != g.ny) throw IoError("FLD1: component shape does not match the grid");
    // Column-major (nx, ny) storage is already x-fastest.
    buf.append(reinterpret_cast<const char*>(c.data()), sizeof(double) * g.points());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Fld1 readFld1(const fs::path& path) {
  const std::string buf = readAll(path);
  if (buf.size() < 32 || buf.compare(0, 4, "FLD1") != 0) throw IoError(path.string() + ": not an FLD1 file");
  const auto nx = get<std::uint32_t>(buf, 4);
  const auto ny = get<std::uint32_t>(buf, 8);
  const auto ncomp = get<std::uint32_t>(buf, 12);
  if (get<std::uint32_t>(buf, 16) != kDtypeFloat64) throw IoError(path.string() + ": unsupported dtype");
  const size_t points = static_cast<size_t>(nx) * ny;
  if (buf.size() != 32 + static_cast<size_t>(ncomp) * points * sizeof(double))
    throw IoError(path.string() + ": size does not match header");

  Fld1 out;
  try {
    out.grid = Grid(static_cast<int>(nx), static_cast<int>(ny));
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    RealBlock block(nx, ny);
    std::memcpy(block.data(), buf.data() + 32 + c * points * sizeof(double), points * sizeof(double));
    out.components.push_back(std::move(block));
  }
  return out;
}

Fld1 snapshotOf(const SimState& s, bool withStress) {
  Fld1 out{s.grid(), {}};
  for (auto& c : inverseTransform(s.u)) out.components.push_back(std::move(c));
  if (withStress)
    for (auto& c : inverseTransform(s.tau)) out.components.push_back(std::move(c));
  return out;
}

SimState stateOf(const Fld1& snap, const ModelParams& params) {
  if (snap.components.size() != 2 && snap.components.size() != 5)
    throw IoError("snapshot must hold 2 or 5 components");
  SimState s(snap.grid, params);
  s.u = transform<2>(snap.grid, PhysicalField<2>{snap.components[0], snap.components[1]});
  if (snap.components.size() == 5)
    s.tau = transform<3>(snap.grid, PhysicalField<3>{snap.components[2], snap.components[3], snap.components[4]});
  return s;
}

std::string sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw IoError("sha256: digest init failed");
  }
  std::array<char, 1 << 16> chunk;
  while (in) {
    in.read(chunk.data(), chunk.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, chunk.data(), static_cast<size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  if (in.bad()) throw IoError("read failed for " + path.string());

  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

void writeFileAtomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& diagnosticsColumns() {
  static const std::vector<std::string> cols{
      "t",         "u_H1",       "u_H2",      "u_H3",       "u_H4",       "u_H5",       "u_H6",
      "tau_H2",    "tau_H6",     "sigma_H2",  "E_low",      "E_high",     "E_total",    "sup_low",
      "int_low",   "sup_high",   "int_high",  "dens_low_sup", "dens_low_int", "dens_high_sup",
      "dens_high_int"};
  return cols;
}

std::string diagnosticsRow(const EnergySample& s) {
  std::string row = formatDouble(s.t);
  auto add = [&](double v) {
    row += ',';
    row += formatDouble(v);
  };
  for (Real n : s.uNorms) add(n);
  for (double v : {s.tauH2, s.tauH6, s.sigmaH2, s.eLow(), s.eHigh(), s.eTotal(), s.supLow, s.intLow, s.supHigh,
                   s.intHigh, s.densities.lowSup, s.densities.lowInt, s.densities.highSup, s.densities.highInt})
    add(v);
  return row;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw IoError("CSV column '" + name + "' missing");
}

CsvTable readCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw IoError(path.string() + ": ragged CSV row");
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw IoError(path.string() + ": non-numeric cell '" + c + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace ovlab
