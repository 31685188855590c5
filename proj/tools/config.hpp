#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fclab/assembly.hpp"
#include "fclab/geometry.hpp"
#include "fclab/nonlinearity.hpp"
#include "fclab/solve.hpp"

namespace fclab::cli {

// Flat dotted key-value configuration.  Values stay strings until a command
// asks for them, so unknown keys are carried through to the manifest as-is.
struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  const std::string& require(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
};

// Lines of "key = value"; '#' starts a comment, blank lines are skipped.
// Overrides are "key=value" strings applied on top of the file.
Config load_config(const std::string& file, const std::vector<std::string>& overrides);

// "lo:hi" boxes joined by ';' in 1d, "x0:x1,y0:y1" in 2d.
Window parse_window(const std::string& text, int dim);

// "const:v", "quad:c0,c1" for c0 + c1 |x|^2, "cos:c0,c1,c2" for
// c0 + c1 cos(c2 x_1).
FieldSpec parse_field(const std::string& text);

// Comma-separated doubles.
std::vector<double> parse_ladder(const std::string& text);

DomainSpec build_domain(const Config& cfg);
KernelParams build_kernel(const Config& cfg, int dim);
CellScheme build_scheme(const Config& cfg);
MagneticPotential build_potential(const Config& cfg);
TaylorNonlinearity build_model(const Config& cfg, const Grid& grid);
SolverOptions build_solver(const Config& cfg);

// out.dir, created on demand.  A relative path is resolved against
// FCLAB_OUTPUT_ROOT when that is set.
std::filesystem::path output_dir(const Config& cfg);

// The full configuration as manifest entries, prefixed with "config.".
std::map<std::string, std::string> manifest_entries(const Config& cfg);

}  // namespace fclab::cli
