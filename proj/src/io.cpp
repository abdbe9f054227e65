#include "doifbp/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "doifbp/errors.hpp"

namespace doifbp {

namespace {

constexpr char kMagic[8] = {'D', 'O', 'I', 'F', 'B', 'P', '0', '1'};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) bytes_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) bytes_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  void array(const double* p, std::size_t n) {
    u64(n);
    for (std::size_t i = 0; i < n; ++i) f64(p[i]);
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::string path, std::vector<char> bytes) : path_(std::move(path)), bytes_(std::move(bytes)) {}

  void need(std::size_t n, const char* section) const {
    if (bytes_.size() - pos_ < n)
      throw IoError(path_, std::string("truncated snapshot: section '") + section + "' is incomplete");
  }
  std::uint64_t uint(int width, const char* section) {
    need(width, section);
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    pos_ += width;
    return v;
  }
  std::uint32_t u32(const char* section) { return static_cast<std::uint32_t>(uint(4, section)); }
  double f64(const char* section) { return std::bit_cast<double>(uint(8, section)); }
  std::vector<double> array(std::size_t expected, const char* section) {
    const std::uint64_t n = uint(8, section);
    if (n != expected)
      throw IoError(path_, std::string("snapshot section '") + section + "' holds " + std::to_string(n) +
                               " values but the header implies " + std::to_string(expected));
    need(8 * n, section);
    std::vector<double> out(n);
    for (auto& v : out) v = f64(section);
    return out;
  }
  const char* take(std::size_t n, const char* section) {
    need(n, section);
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool done() const { return pos_ == bytes_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_diagnostics(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::string text = std::string(kDiagnosticsHeader) + "\n";
  for (const auto& r : records) {
    const double row[] = {r.t,        r.E_total,      r.E_kinetic,  r.E_pressure, r.E_eta,      r.E_entropy, r.D_fisher_tau,
                          r.D_fisher_x, r.D_grad_u, r.D_div_u, r.D_grad_eta, r.mass, r.rod_mass};
    for (std::size_t k = 0; k < std::size(row); ++k) text += (k ? "," : "") + fmt(row[k]);
    text += "\n";
  }
  write_text(path, text);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "missing CSV header");
  t.header = split(line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw IoError(path, "line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end != c.c_str() + c.size()) throw IoError(path, "line " + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path) {
  const CsvTable t = read_csv(path);
  std::string header;
  for (std::size_t k = 0; k < t.header.size(); ++k) header += (k ? "," : "") + t.header[k];
  if (header != kDiagnosticsHeader) throw IoError(path, "not a diagnostics CSV (header mismatch)");
  std::vector<DiagnosticsRecord> out;
  for (const auto& r : t.rows)
    out.push_back({r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8], r[9], r[10], r[11], r[12]});
  return out;
}

void write_sweep(const SweepResult& sweep, const std::string& path) {
  std::string text = std::string(kSweepHeader) + "\n";
  for (const auto& row : sweep.rows) {
    text += fmt(row.gamma);
    for (double e : row.excess) text += "," + fmt(e);
    text += "," + fmt(row.rho_gamma_time_integral) + "," + fmt(row.complementarity) + "," +
            fmt(row.incompressibility_defect) + "," + fmt(row.congested_volume) + "," + fmt(sweep.eps) + "," +
            std::to_string(row.steps) + "," + (sweep.slope_l2 ? fmt(*sweep.slope_l2) : std::string()) + "\n";
  }
  write_text(path, text);
}

void snapshot(const FluidState& s, const std::string& path) {
  const Grid& g = s.grid();
  ByteWriter w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(static_cast<std::uint32_t>(g.dim()));
  w.u32(g.bc() == Boundary::periodic ? 0u : 1u);
  w.u32(static_cast<std::uint32_t>(g.cells(0)));
  w.u32(static_cast<std::uint32_t>(g.cells(1)));
  w.f64(g.h(0));
  w.f64(g.h(1));
  w.u32(static_cast<std::uint32_t>(s.basis().degree()));
  w.f64(s.law.gamma());
  w.f64(s.coeffs.mu);
  w.f64(s.coeffs.lambda);
  w.f64(s.coeffs.D);
  w.f64(s.coeffs.D_tau);
  w.f64(s.t);
  w.array(s.rho.values.data(), s.rho.size());
  w.array(s.u.values.data(), s.u.values.size());
  w.array(s.eta.values.data(), s.eta.size());
  w.array(s.f.coeffs.data(), static_cast<std::size_t>(s.f.coeffs.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

FluidState load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ByteReader r(path, std::move(bytes));

  const char* magic = r.take(sizeof kMagic, "magic");
  if (std::memcmp(magic, kMagic, 6) != 0) throw IoError(path, "bad magic: not a snapshot file");
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw IoError(path, "unsupported snapshot version '" + std::string(magic + 6, 2) + "' (expected 01)");

  const char* hdr = "header";
  const std::uint32_t dim = r.u32(hdr);
  const std::uint32_t bc = r.u32(hdr);
  const std::uint32_t nx = r.u32(hdr);
  const std::uint32_t ny = r.u32(hdr);
  const double hx = r.f64(hdr);
  const double hy = r.f64(hdr);
  const std::uint32_t degree = r.u32(hdr);
  const double gamma = r.f64(hdr);
  PhysCoeffs coeffs;
  coeffs.mu = r.f64(hdr);
  coeffs.lambda = r.f64(hdr);
  coeffs.D = r.f64(hdr);
  coeffs.D_tau = r.f64(hdr);
  const double t = r.f64(hdr);

  auto bad_header = [&](const std::string& what) { return IoError(path, "inconsistent snapshot header: " + what); };
  if (dim != 1 && dim != 2) throw bad_header("dim=" + std::to_string(dim));
  if (bc > 1) throw bad_header("boundary code " + std::to_string(bc));
  if (nx < 4 || nx > (1u << 24) || (dim == 2 ? (ny < 4 || ny > (1u << 24)) : ny != 1))
    throw bad_header("cell counts " + std::to_string(nx) + "x" + std::to_string(ny));
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) throw bad_header("nonpositive spacing");
  if (degree < 2 || degree > 64) throw bad_header("sphere degree " + std::to_string(degree));
  if (!(gamma > 1.5)) throw bad_header("gamma must exceed 3/2");
  if (!std::isfinite(t)) throw bad_header("time is not finite");

  FluidState s = [&] {
    try {
      const Grid g(static_cast<int>(dim), {static_cast<int>(nx), static_cast<int>(ny)}, {hx, hy},
                   bc == 0 ? Boundary::periodic : Boundary::dirichlet);
      coeffs.validate();
      const auto basis = make_sphere_basis(static_cast<int>(degree));
      return FluidState{ScalarField(g), VectorField(g), ScalarField(g), OrientationField(g, basis), t, PressureLaw(gamma), coeffs};
    } catch (const std::exception& e) {
      throw bad_header(e.what());
    }
  }();

  const std::size_t n = s.grid().size();
  s.rho.values = r.array(n, "rho");
  s.u.values = r.array(n * dim, "u");
  s.eta.values = r.array(n, "eta");
  const std::vector<double> fc = r.array(n * static_cast<std::size_t>(s.basis().num_coeffs()), "f");
  std::memcpy(s.f.coeffs.data(), fc.data(), fc.size() * sizeof(double));
  if (!r.done()) throw IoError(path, "snapshot has trailing bytes after section 'f'");
  return s;
}

}  // namespace doifbp
