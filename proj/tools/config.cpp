#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace fclab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    if (p == std::string::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, p - start)));
    start = p + 1;
  }
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not a number: '" + text + "'");
  }
}

void set_pair(Config& cfg, const std::string& line, const std::string& what) {
  const auto p = line.find('=');
  if (p == std::string::npos)
    throw std::invalid_argument(what + ": expected key=value, got '" + line + "'");
  const std::string key = trim(line.substr(0, p));
  const std::string val = trim(line.substr(p + 1));
  if (key.empty()) throw std::invalid_argument(what + ": empty key in '" + line + "'");
  cfg.kv[key] = val;
}

}  // namespace

const std::string& Config::require(const std::string& key) const {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing config key: " + key);
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : to_double(it->second, "config key " + key);
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config key " + key + ": expected an integer");
  return i;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw std::invalid_argument("config key " + key + ": expected a boolean, got '" + v + "'");
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("config key " + key + ": expected an unsigned integer");
  }
}

Config load_config(const std::string& file, const std::vector<std::string>& overrides) {
  Config cfg;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open config file: " + file);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      set_pair(cfg, line, file + ":" + std::to_string(lineno));
    }
  }
  for (const auto& o : overrides) set_pair(cfg, o, "--set");
  return cfg;
}

Window parse_window(const std::string& text, int dim) {
  Window w;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    Box box;
    const auto axes = split(part, ',');
    if (axes.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("window box '" + part + "': expected " + std::to_string(dim) +
                                  " axis range(s)");
    for (int d = 0; d < dim; ++d) {
      const auto r = split(axes[static_cast<std::size_t>(d)], ':');
      if (r.size() != 2)
        throw std::invalid_argument("window box '" + part + "': expected lo:hi per axis");
      box.lo[static_cast<std::size_t>(d)] = to_double(r[0], "window");
      box.hi[static_cast<std::size_t>(d)] = to_double(r[1], "window");
      if (!(box.lo[static_cast<std::size_t>(d)] < box.hi[static_cast<std::size_t>(d)]))
        throw std::invalid_argument("window box '" + part + "': lo must be below hi");
    }
    w.boxes.push_back(box);
  }
  if (w.empty()) throw std::invalid_argument("window '" + text + "': no boxes");
  return w;
}

FieldSpec parse_field(const std::string& text) {
  const auto p = text.find(':');
  if (p == std::string::npos)
    throw std::invalid_argument("field '" + text + "': expected kind:values");
  const std::string kind = trim(text.substr(0, p));
  const auto vals = split(text.substr(p + 1), ',');
  const auto need = [&](std::size_t n) {
    if (vals.size() != n)
      throw std::invalid_argument("field '" + text + "': expected " + std::to_string(n) +
                                  " value(s)");
  };
  if (kind == "const") {
    need(1);
    return FieldSpec::constant(to_double(vals[0], "field"));
  }
  if (kind == "quad") {
    need(2);
    return FieldSpec::quadratic(to_double(vals[0], "field"), to_double(vals[1], "field"));
  }
  if (kind == "cos") {
    need(3);
    return FieldSpec::cosine(to_double(vals[0], "field"), to_double(vals[1], "field"),
                             to_double(vals[2], "field"));
  }
  throw std::invalid_argument("field '" + text + "': unknown kind '" + kind + "'");
}

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    out.push_back(to_double(part, "ladder"));
  }
  if (out.empty()) throw std::invalid_argument("ladder '" + text + "': no values");
  return out;
}

DomainSpec build_domain(const Config& cfg) {
  DomainSpec spec;
  spec.dim = cfg.get_int("domain.dim", 1);
  spec.half_width = cfg.get_double("domain.half_width", 8.0);
  spec.spacing = cfg.get_double("domain.spacing", 0.25);
  spec.omega_radius = cfg.get_double("domain.omega_radius", 1.0);
  spec.support_radius = cfg.get_double("domain.support_radius", 2.0);
  spec.window1 = parse_window(cfg.get("domain.window1", "-7.5:-6.4"), spec.dim);
  spec.window2 = parse_window(cfg.get("domain.window2", "6.4:7.5"), spec.dim);
  spec.validate();
  return spec;
}

KernelParams build_kernel(const Config& cfg, int dim) {
  return KernelParams::make(dim, cfg.get_double("kernel.s", 0.5));
}

CellScheme build_scheme(const Config& cfg) {
  return scheme_from_name(cfg.get("kernel.scheme", "m2"));
}

MagneticPotential build_potential(const Config& cfg) {
  const int dim = cfg.get_int("domain.dim", 1);
  const std::string kind = cfg.get("potential.kind", "zero");
  if (kind == "zero") return MagneticPotential::zero(dim);
  if (kind == "bump") {
    const double support =
        cfg.get_double("potential.support", cfg.get_double("domain.support_radius", 2.0));
    const double amp =
        cfg.get_double("potential.amplitude", 0.8 * admissible_sup_bound(dim, support));
    return MagneticPotential::bump(dim, amp, support);
  }
  throw std::invalid_argument("potential.kind: unknown kind '" + kind + "'");
}

TaylorNonlinearity build_model(const Config& cfg, const Grid& grid) {
  const std::string preset = cfg.get("model.preset", "polynomial");
  const double radius = cfg.get_double("model.radius", 4.0);
  if (preset == "polynomial") {
    std::vector<FieldSpec> fields;
    for (int k = 1;; ++k) {
      const std::string key = "model.a" + std::to_string(k);
      if (!cfg.has(key)) break;
      fields.push_back(parse_field(cfg.require(key)));
    }
    if (fields.empty()) throw std::invalid_argument("model.a1: required for the polynomial preset");
    return make_polynomial(grid, fields, radius);
  }
  const FieldSpec a1 = parse_field(cfg.get("model.a1", "const:1.0"));
  if (preset == "linear") return make_linear(grid, a1, radius);
  const int order = cfg.get_int("model.order", 8);
  if (preset == "expm1") return make_expm1(grid, a1, order, radius);
  if (preset == "sine") return make_sine(grid, a1, order, radius);
  throw std::invalid_argument("model.preset: unknown preset '" + preset + "'");
}

SolverOptions build_solver(const Config& cfg) {
  SolverOptions opts;
  opts.rho = cfg.get_double("solver.rho", opts.rho);
  opts.tol = cfg.get_double("solver.tol", opts.tol);
  opts.max_iter = cfg.get_int("solver.max_iter", opts.max_iter);
  opts.check_c2_bound = cfg.get_bool("solver.check_c2", opts.check_c2_bound);
  return opts;
}

std::filesystem::path output_dir(const Config& cfg) {
  std::filesystem::path dir = cfg.require("out.dir");
  if (dir.is_relative()) {
    if (const char* root = std::getenv("FCLAB_OUTPUT_ROOT")) dir = std::filesystem::path(root) / dir;
  }
  std::filesystem::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> manifest_entries(const Config& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : cfg.kv) out["config." + k] = v;
  return out;
}

}  // namespace fclab::cli
