#include "fclab/geometry.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fclab {

double norm2(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1]); }

double dist(const Point& a, const Point& b) {
  return norm2({a[0] - b[0], a[1] - b[1]});
}

bool Box::contains(const Point& p, int dim, double tol) const {
  for (int d = 0; d < dim; ++d) {
    if (p[d] < lo[d] - tol || p[d] > hi[d] + tol) return false;
  }
  return true;
}

double Box::min_abs(int dim) const {
  double sq = 0.0;
  for (int d = 0; d < dim; ++d) {
    double t = 0.0;
    if (lo[d] > 0.0) t = lo[d];
    else if (hi[d] < 0.0) t = -hi[d];
    sq += t * t;
  }
  return std::sqrt(sq);
}

bool Window::contains(const Point& p, int dim, double tol) const {
  for (const auto& b : boxes) {
    if (b.contains(p, dim, tol)) return true;
  }
  return false;
}

double Window::min_abs(int dim) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) m = std::min(m, b.min_abs(dim));
  return m;
}

void DomainSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("DomainSpec: dim must be 1 or 2");
  if (!(half_width > 0.0)) throw std::invalid_argument("DomainSpec: half_width must be positive");
  if (!(spacing > 0.0) || spacing > half_width)
    throw std::invalid_argument("DomainSpec: spacing must lie in (0, half_width]");
  const double ratio = half_width / spacing;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw std::invalid_argument("DomainSpec: half_width must be an integer multiple of spacing");
  if (!(omega_radius > 0.0)) throw std::invalid_argument("DomainSpec: omega_radius must be positive");
  if (!(omega_radius < support_radius))
    throw std::invalid_argument("DomainSpec: omega_radius must be < support_radius");
  if (!(support_radius < half_width))
    throw std::invalid_argument("DomainSpec: support_radius must be < half_width");
  for (const Window* w : {&window1, &window2}) {
    for (const auto& b : w->boxes) {
      for (int d = 0; d < dim; ++d) {
        if (!(b.lo[d] < b.hi[d]))
          throw std::invalid_argument("DomainSpec: window box must have lo < hi per axis");
        if (b.lo[d] < -half_width - 1e-12 || b.hi[d] > half_width + 1e-12)
          throw std::invalid_argument("DomainSpec: window box must lie inside [-L, L]^n");
      }
    }
    if (!w->empty() && w->min_abs(dim) < 3.0 * support_radius - 1e-12)
      throw std::invalid_argument("DomainSpec: windows must not meet the ball of radius 3r");
  }
}

Grid build_grid(const DomainSpec& spec) {
  spec.validate();
  Grid g;
  g.spec = spec;
  const int m = static_cast<int>(std::llround(spec.half_width / spec.spacing));
  const int npa = 2 * m + 1;
  g.nodes_per_axis = npa;

  // (i - m) * h keeps the lattice exactly symmetric about the origin.
  std::vector<double> axis(npa);
  for (int i = 0; i < npa; ++i) axis[i] = (i - m) * spec.spacing;

  const std::size_t total = spec.dim == 1 ? static_cast<std::size_t>(npa)
                                          : static_cast<std::size_t>(npa) * npa;
  g.coords.resize(total);
  g.region.resize(total);
  g.flags.assign(total, 0);
  g.interior_pos.assign(total, -1);

  const double r_in = spec.omega_radius - 1e-12 * std::max(1.0, spec.omega_radius);
  for (std::size_t i = 0; i < total; ++i) {
    Point p{0.0, 0.0};
    if (spec.dim == 1) {
      p[0] = axis[i];
    } else {
      p[0] = axis[i / npa];
      p[1] = axis[i % npa];
    }
    g.coords[i] = p;
    const double rad = norm2(p);
    g.region[i] = rad < r_in ? Region::Interior : Region::Exterior;
    std::uint8_t f = 0;
    if (spec.window1.contains(p, spec.dim, 1e-9)) f |= node_flag::window1;
    if (spec.window2.contains(p, spec.dim, 1e-9)) f |= node_flag::window2;
    if (rad <= spec.support_radius + 1e-12) f |= node_flag::ball_r;
    if (rad <= 3.0 * spec.support_radius + 1e-12) f |= node_flag::ball_3r;
    g.flags[i] = f;
    if (g.region[i] == Region::Interior) {
      g.interior_pos[i] = static_cast<std::int32_t>(g.interior_nodes.size());
      g.interior_nodes.push_back(static_cast<std::int32_t>(i));
    } else {
      g.exterior_nodes.push_back(static_cast<std::int32_t>(i));
    }
  }
  if (g.interior_nodes.empty())
    throw std::invalid_argument("build_grid: no lattice node falls inside Omega; refine spacing");
  return g;
}

std::array<int, 2> Grid::lattice(std::size_t i) const {
  if (spec.dim == 1) return {static_cast<int>(i), 0};
  const int npa = nodes_per_axis;
  return {static_cast<int>(i) / npa, static_cast<int>(i) % npa};
}

std::ptrdiff_t Grid::node_at(const std::array<int, 2>& idx) const {
  const int npa = nodes_per_axis;
  if (idx[0] < 0 || idx[0] >= npa) return -1;
  if (spec.dim == 1) return idx[0];
  if (idx[1] < 0 || idx[1] >= npa) return -1;
  return static_cast<std::ptrdiff_t>(idx[0]) * npa + idx[1];
}

std::vector<std::int32_t> Grid::window_nodes(int which) const {
  std::vector<std::int32_t> out;
  const std::uint8_t mask = which == 1 ? node_flag::window1 : node_flag::window2;
  for (std::size_t i = 0; i < size(); ++i) {
    if (flags[i] & mask) out.push_back(static_cast<std::int32_t>(i));
  }
  return out;
}

std::uint64_t fnv1a(const void* data, std::size_t nbytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < nbytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a_mix(std::uint64_t h, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  return fnv1a(&bits, sizeof bits, h);
}

std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t v) {
  return fnv1a(&v, sizeof v, h);
}

std::uint64_t fnv1a_mix(std::uint64_t h, const std::string& s) {
  return fnv1a(s.data(), s.size(), h);
}

std::uint64_t Grid::identity_hash() const {
  std::uint64_t h = fnv1a_mix(0xcbf29ce484222325ull, static_cast<std::uint64_t>(spec.dim));
  h = fnv1a_mix(h, spec.half_width);
  h = fnv1a_mix(h, spec.spacing);
  h = fnv1a_mix(h, spec.omega_radius);
  h = fnv1a_mix(h, spec.support_radius);
  for (const Window* w : {&spec.window1, &spec.window2}) {
    h = fnv1a_mix(h, static_cast<std::uint64_t>(w->boxes.size()));
    for (const auto& b : w->boxes) {
      for (int d = 0; d < 2; ++d) {
        h = fnv1a_mix(h, b.lo[d]);
        h = fnv1a_mix(h, b.hi[d]);
      }
    }
  }
  h = fnv1a(region.data(), region.size() * sizeof(Region), h);
  h = fnv1a(flags.data(), flags.size(), h);
  return h;
}

MagneticPotential MagneticPotential::zero(int dim) {
  MagneticPotential a;
  a.dim = dim;
  a.support_radius = 0.0;
  a.sup_norm = 0.0;
  a.is_zero = true;
  a.eval = [](const Point&) { return Point{0.0, 0.0}; };
  a.identity_hash = fnv1a_mix(fnv1a_mix(0xcbf29ce484222325ull, std::string("zero")),
                              static_cast<std::uint64_t>(dim));
  return a;
}

namespace {
// C^2 smoothstep, 1 below t = 0.8, 0 above t = 0.95.
double cutoff(double t) {
  if (t <= 0.8) return 1.0;
  if (t >= 0.95) return 0.0;
  const double u = (0.95 - t) / 0.15;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
}  // namespace

MagneticPotential MagneticPotential::bump(int dim, double amplitude, double support_radius) {
  if (!(support_radius > 0.0))
    throw std::invalid_argument("MagneticPotential::bump: support_radius must be positive");
  MagneticPotential a;
  a.dim = dim;
  a.support_radius = support_radius;
  a.sup_norm = std::abs(amplitude);
  a.is_zero = amplitude == 0.0;
  const double sigma = support_radius / 3.0;
  a.eval = [amplitude, support_radius, sigma](const Point& x) {
    const double r = norm2(x);
    const double t = r / support_radius;
    if (t >= 0.95) return Point{0.0, 0.0};
    const double v = amplitude * std::exp(-r * r / (2.0 * sigma * sigma)) * cutoff(t);
    return Point{v, 0.0};
  };
  std::uint64_t h = fnv1a_mix(0xcbf29ce484222325ull, std::string("bump"));
  h = fnv1a_mix(h, static_cast<std::uint64_t>(dim));
  h = fnv1a_mix(h, amplitude);
  h = fnv1a_mix(h, support_radius);
  a.identity_hash = h;
  return a;
}

double admissible_sup_bound(int dim, double support_radius) {
  const double pi = 3.14159265358979323846;
  return pi / (8.0 * std::sqrt(static_cast<double>(dim)) * support_radius);
}

AdmissibilityReport check_admissibility(const DomainSpec& spec, const MagneticPotential& a) {
  AdmissibilityReport rep;
  auto add = [&rep](const std::string& name, double measured, double limit, bool pass) {
    rep.checks.push_back({name, pass, measured, limit});
  };
  add("omega-in-ball", spec.omega_radius, spec.support_radius,
      spec.omega_radius < spec.support_radius);
  add("potential-support", a.support_radius, spec.support_radius,
      a.support_radius <= spec.support_radius + 1e-12);
  const double bound = admissible_sup_bound(spec.dim, spec.support_radius);
  add("potential-sup-norm", a.sup_norm, bound, a.sup_norm <= bound * (1.0 + 1e-12));
  const double sep = 3.0 * spec.support_radius;
  for (int w = 1; w <= 2; ++w) {
    const Window& win = w == 1 ? spec.window1 : spec.window2;
    const double d = win.empty() ? std::numeric_limits<double>::infinity()
                                 : win.min_abs(spec.dim);
    add(w == 1 ? "window1-separation" : "window2-separation", d, sep, d >= sep - 1e-12);
  }
  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace fclab
