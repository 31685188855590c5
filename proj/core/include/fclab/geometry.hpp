#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fclab {

// Points live in R^1 or R^2; for dim == 1 the second component is kept at 0
// so the same arithmetic works in both cases.
using Point = std::array<double, 2>;

double norm2(const Point& p);
double dist(const Point& a, const Point& b);

// Closed axis-aligned box.  For dim == 1 only the first axis is meaningful.
struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};

  bool contains(const Point& p, int dim, double tol = 0.0) const;
  double min_abs(int dim) const;  // distance from the origin to the box, 0 if it straddles
};

// Finite union of boxes; used for the exterior measurement windows.
struct Window {
  std::vector<Box> boxes;

  bool empty() const { return boxes.empty(); }
  bool contains(const Point& p, int dim, double tol = 0.0) const;
  double min_abs(int dim) const;
};

// Geometry of one experiment: lattice box [-L, L]^n with spacing h, the
// unknown region Omega = B(0, r_omega), the admissibility ball B(0, r) that
// must contain Omega and supp A, and two exterior windows.
//
// Invariants enforced by validate():
//   0 < h <= L, L/h integral to 1e-9, r_omega < r < L,
//   windows inside the lattice box and disjoint from B(0, 3r).
struct DomainSpec {
  int dim = 1;
  double half_width = 8.0;   // L
  double spacing = 0.25;     // h
  double omega_radius = 1.0; // r_omega
  double support_radius = 2.0; // r
  Window window1;  // controls
  Window window2;  // measurements

  void validate() const;  // throws std::invalid_argument naming the violated constraint
};

enum class Region : std::uint8_t { Interior = 0, Exterior = 1 };

// Node classification bit flags.
namespace node_flag {
inline constexpr std::uint8_t window1 = 1u << 0;
inline constexpr std::uint8_t window2 = 1u << 1;
inline constexpr std::uint8_t ball_r = 1u << 2;   // inside B(0, r)
inline constexpr std::uint8_t ball_3r = 1u << 3;  // inside B(0, 3r)
}  // namespace node_flag

// Uniform lattice over [-L, L]^n, nodes ordered lexicographically by
// (i_1, ..., i_n) with the last axis fastest.  Every node owns the full cell
// of side h centered at it, so the cells tile [-L - h/2, L + h/2]^n; the
// integrable tail of the kernel outside that enlarged box is accounted for
// separately (see tail_mass).
struct Grid {
  DomainSpec spec;
  int nodes_per_axis = 0;
  std::vector<Point> coords;
  std::vector<Region> region;
  std::vector<std::uint8_t> flags;
  std::vector<std::int32_t> interior_nodes;
  std::vector<std::int32_t> exterior_nodes;
  // Position of a node in interior_nodes, -1 for exterior nodes.
  std::vector<std::int32_t> interior_pos;

  int dim() const { return spec.dim; }
  std::size_t size() const { return coords.size(); }
  double spacing() const { return spec.spacing; }
  // Half-width of the box tiled by the cells.
  double quad_half_width() const { return spec.half_width + 0.5 * spec.spacing; }

  bool is_interior(std::size_t i) const { return region[i] == Region::Interior; }
  bool in_window1(std::size_t i) const { return flags[i] & node_flag::window1; }
  bool in_window2(std::size_t i) const { return flags[i] & node_flag::window2; }
  bool in_ball_r(std::size_t i) const { return flags[i] & node_flag::ball_r; }
  bool in_ball_3r(std::size_t i) const { return flags[i] & node_flag::ball_3r; }

  std::array<int, 2> lattice(std::size_t i) const;
  std::ptrdiff_t node_at(const std::array<int, 2>& idx) const;  // -1 if off-lattice

  std::vector<std::int32_t> window_nodes(int which) const;  // which in {1, 2}

  std::uint64_t identity_hash() const;
};

Grid build_grid(const DomainSpec& spec);

// Magnetic potential A: R^n -> R^n, compactly supported in B(0, support_radius).
// eval must return exact zeros outside the support ball; the factories below
// guarantee that.  sup_norm is an upper bound for |A| used by the
// admissibility check, exact for the factory presets.
struct MagneticPotential {
  int dim = 1;
  double support_radius = 0.0;
  double sup_norm = 0.0;
  bool is_zero = true;
  std::function<Point(const Point&)> eval;
  std::uint64_t identity_hash = 0;

  Point operator()(const Point& x) const { return eval(x); }

  static MagneticPotential zero(int dim);
  // Radial C^2 bump amp * exp(-|x|^2 / (2 sigma^2)) * cutoff(|x| / support_radius)
  // pointing along the first axis; the cutoff is a quintic smoothstep that
  // vanishes identically for |x| >= 0.95 * support_radius.
  static MagneticPotential bump(int dim, double amplitude, double support_radius);
};

// Largest sup-norm of A compatible with admissibility for given r.
double admissible_sup_bound(int dim, double support_radius);

struct AdmissibilityCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityCheck> checks;
  bool pass = false;
};

// Verifies Omega and supp A fit in B(0, r), the sup-norm bound on A, and the
// window / B(0, 3r) separation.  Never throws; callers decide what a failure
// means for them.
AdmissibilityReport check_admissibility(const DomainSpec& spec,
                                        const MagneticPotential& a);

// FNV-1a over a byte view; used for the identity hashes baked into run
// manifests.  Stable across platforms for the same logical inputs.
std::uint64_t fnv1a(const void* data, std::size_t nbytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a_mix(std::uint64_t h, double v);
std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t v);
std::uint64_t fnv1a_mix(std::uint64_t h, const std::string& s);

}  // namespace fclab
