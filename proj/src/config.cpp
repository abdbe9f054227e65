#include "doifbp/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "doifbp/errors.hpp"

namespace doifbp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    fail_line(line, "key '" + key + "' expects a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& s, int line, const std::string& key) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    fail_line(line, "key '" + key + "' expects an integer, got '" + s + "'");
  return v;
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out;
}

[[noreturn]] void fail_key(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"uniform", "colliding_streams", "smooth", "pulse"};
  return names;
}

Grid RunConfig::grid() const {
  std::array<int, 2> c{cells.at(0), dim == 2 ? cells.at(1) : 1};
  std::array<double, 2> h{lengths.at(0) / c[0], dim == 2 ? lengths.at(1) / c[1] : 1.0};
  return Grid(dim, c, h, bc);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::function<void(const std::string&, int)>> handlers;
  auto real = [](double& field, const char* key) {
    return [&field, key](const std::string& v, int line) { field = to_double(v, line, key); };
  };
  auto integer = [](auto& field, const char* key) {
    return [&field, key](const std::string& v, int line) {
      field = static_cast<std::remove_reference_t<decltype(field)>>(to_integer(v, line, key));
    };
  };
  handlers["dim"] = integer(cfg.dim, "dim");
  handlers["cells"] = [&cfg](const std::string& v, int line) {
    cfg.cells.clear();
    for (const auto& s : split_list(v)) cfg.cells.push_back(static_cast<int>(to_integer(s, line, "cells")));
  };
  handlers["lengths"] = [&cfg](const std::string& v, int line) {
    cfg.lengths.clear();
    for (const auto& s : split_list(v)) cfg.lengths.push_back(to_double(s, line, "lengths"));
  };
  handlers["bc"] = [&cfg](const std::string& v, int line) {
    if (v == "periodic") cfg.bc = Boundary::periodic;
    else if (v == "dirichlet") cfg.bc = Boundary::dirichlet;
    else fail_line(line, "bc must be 'periodic' or 'dirichlet', got '" + v + "'");
  };
  handlers["sphere_degree"] = integer(cfg.sphere_degree, "sphere_degree");
  handlers["gamma"] = [&cfg](const std::string& v, int line) {
    cfg.gammas.clear();
    for (const auto& s : split_list(v)) cfg.gammas.push_back(to_double(s, line, "gamma"));
  };
  handlers["mu"] = real(cfg.coeffs.mu, "mu");
  handlers["lambda"] = real(cfg.coeffs.lambda, "lambda");
  handlers["D"] = real(cfg.coeffs.D, "D");
  handlers["D_tau"] = real(cfg.coeffs.D_tau, "D_tau");
  handlers["preset"] = [&cfg](const std::string& v, int) { cfg.preset = v; };
  handlers["init.rho0"] = real(cfg.rho0, "init.rho0");
  handlers["init.amplitude"] = real(cfg.amplitude, "init.amplitude");
  handlers["init.eta0"] = real(cfg.eta0, "init.eta0");
  handlers["init.anisotropy"] = real(cfg.anisotropy, "init.anisotropy");
  handlers["init.noise"] = real(cfg.noise, "init.noise");
  handlers["t_final"] = real(cfg.t_final, "t_final");
  handlers["cfl_safety"] = real(cfg.cfl_safety, "cfl_safety");
  handlers["record_every"] = integer(cfg.record_every, "record_every");
  handlers["snapshot_every"] = integer(cfg.snapshot_every, "snapshot_every");
  handlers["congestion_eps"] = real(cfg.congestion_eps, "congestion_eps");
  handlers["output_dir"] = [&cfg](const std::string& v, int) { cfg.output_dir = v; };
  handlers["seed"] = [&cfg](const std::string& v, int line) {
    const long long s = to_integer(v, line, "seed");
    if (s < 0) fail_line(line, "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  };

  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail_line(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto h = handlers.find(key);
    if (h == handlers.end()) fail_line(line, "unknown key '" + key + "'");
    if (seen.count(key)) fail_line(line, "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")");
    if (value.empty()) fail_line(line, "key '" + key + "' has no value");
    seen[key] = line;
    h->second(value, line);
  }

  // A single cell count or length applies to every axis.
  if (cfg.dim == 2 && cfg.cells.size() == 1) cfg.cells.push_back(cfg.cells[0]);
  if (cfg.dim == 2 && cfg.lengths.size() == 1) cfg.lengths.push_back(cfg.lengths[0]);
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) fail_key("dim", "physical dimension must be 1 or 2");
  if (static_cast<int>(c.cells.size()) != c.dim) fail_key("cells", "expected one cell count per axis");
  if (static_cast<int>(c.lengths.size()) != c.dim) fail_key("lengths", "expected one length per axis");
  for (int n : c.cells)
    if (n < 4) fail_key("cells", "at least 4 cells per axis are required");
  for (double l : c.lengths)
    if (!(l > 0.0)) fail_key("lengths", "domain lengths must be positive");
  if (c.sphere_degree < 2) fail_key("sphere_degree", "sphere degree L must be at least 2");
  if (c.gammas.empty()) fail_key("gamma", "at least one gamma is required");
  for (std::size_t i = 0; i < c.gammas.size(); ++i) {
    if (!(c.gammas[i] > 1.5)) fail_key("gamma", "gamma must exceed 3/2 (got " + number(c.gammas[i]) + ")");
    if (i > 0 && !(c.gammas[i] > c.gammas[i - 1])) fail_key("gamma", "gamma list must be strictly increasing");
  }
  if (!(c.coeffs.mu > 0.0)) fail_key("mu", "must be strictly positive");
  if (!(c.coeffs.lambda > 0.0)) fail_key("lambda", "must be strictly positive");
  if (!(c.coeffs.D > 0.0)) fail_key("D", "must be strictly positive");
  if (!(c.coeffs.D_tau > 0.0)) fail_key("D_tau", "must be strictly positive");
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), c.preset) == names.end()) fail_key("preset", "unknown preset '" + c.preset + "'");
  if (!(c.rho0 > 0.0 && c.rho0 < 1.0)) fail_key("init.rho0", "mean density must lie strictly between 0 and 1 (0 < M < 1)");
  if (!(c.eta0 >= 0.0)) fail_key("init.eta0", "eta must be nonnegative");
  if (!(c.anisotropy >= -0.5 && c.anisotropy <= 1.0)) fail_key("init.anisotropy", "must lie in [-1/2, 1] to keep f nonnegative");
  if (!(c.noise >= 0.0 && c.noise < 1.0)) fail_key("init.noise", "must lie in [0, 1)");
  if (!std::isfinite(c.amplitude)) fail_key("init.amplitude", "must be finite");
  if (!(c.t_final >= 0.0)) fail_key("t_final", "must be nonnegative");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) fail_key("cfl_safety", "must lie in (0, 1]");
  if (c.record_every < 1) fail_key("record_every", "must be at least 1");
  if (c.snapshot_every < 0) fail_key("snapshot_every", "must be nonnegative");
  if (!(c.congestion_eps > 0.0 && c.congestion_eps < 1.0)) fail_key("congestion_eps", "must lie in (0, 1)");
  if (c.output_dir.empty()) fail_key("output_dir", "must not be empty");
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "dim = " << c.dim << "\n";
  out << "cells = " << join(c.cells, [](int v) { return std::to_string(v); }) << "\n";
  out << "lengths = " << join(c.lengths, number) << "\n";
  out << "bc = " << (c.bc == Boundary::periodic ? "periodic" : "dirichlet") << "\n";
  out << "sphere_degree = " << c.sphere_degree << "\n";
  out << "gamma = " << join(c.gammas, number) << "\n";
  out << "mu = " << number(c.coeffs.mu) << "\n";
  out << "lambda = " << number(c.coeffs.lambda) << "\n";
  out << "D = " << number(c.coeffs.D) << "\n";
  out << "D_tau = " << number(c.coeffs.D_tau) << "\n";
  out << "preset = " << c.preset << "\n";
  out << "init.rho0 = " << number(c.rho0) << "\n";
  out << "init.amplitude = " << number(c.amplitude) << "\n";
  out << "init.eta0 = " << number(c.eta0) << "\n";
  out << "init.anisotropy = " << number(c.anisotropy) << "\n";
  out << "init.noise = " << number(c.noise) << "\n";
  out << "t_final = " << number(c.t_final) << "\n";
  out << "cfl_safety = " << number(c.cfl_safety) << "\n";
  out << "record_every = " << c.record_every << "\n";
  out << "snapshot_every = " << c.snapshot_every << "\n";
  out << "congestion_eps = " << number(c.congestion_eps) << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace doifbp
