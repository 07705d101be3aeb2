#include "smot/geometry/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace smot {
namespace {

constexpr double kPi = std::numbers::pi;

// Unit vector in R^n from n-1 angles: (phi) for n = 2 is (cos, sin);
// (phi, theta) for n = 3 is the usual spherical direction.
Vec direction(int n, std::span<const double> angles) {
  Vec v(n);
  if (n == 2) {
    v << std::cos(angles[0]), std::sin(angles[0]);
  } else {
    const double phi = angles[0];
    const double theta = angles[1];
    v << std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi);
  }
  return v;
}

// Angle axes for the direction() parametrization.
std::vector<AxisSpec> angle_axes(int n, int resolution) {
  if (n == 2) return {{0.0, 2.0 * kPi, FaceKind::Periodic, FaceKind::Periodic, resolution}};
  return {{0.0, kPi, FaceKind::Collapsed, FaceKind::Collapsed, resolution},
          {0.0, 2.0 * kPi, FaceKind::Periodic, FaceKind::Periodic, resolution}};
}

int dim_param(const std::map<std::string, double>& p, const CatalogEntry& e) {
  const double raw = p.at("dim");
  const int n = static_cast<int>(std::lround(raw));
  if (std::abs(raw - n) > 0 || std::find(e.dims.begin(), e.dims.end(), n) == e.dims.end()) {
    throw Error("surface '" + e.id + "': unsupported dim " + std::to_string(raw));
  }
  return n;
}

ParametricChart flat_disc(const std::map<std::string, double>& p, int n, int res) {
  const double radius = p.at("radius");
  const double tilt = p.at("tilt");
  if (!(radius > 0)) throw Error("flat-disc: radius must be positive");
  ParametricChart c;
  c.ambient_dim = n + 1;
  c.axes.push_back({0.0, radius, FaceKind::Collapsed, FaceKind::Boundary, res});
  for (const AxisSpec& a : angle_axes(n, res)) c.axes.push_back(a);
  c.map = [n, tilt](std::span<const double> s) {
    Vec x = Vec::Zero(n + 1);
    x.head(n) = s[0] * direction(n, s.subspan(1));
    // Rotate the (x0, x_n) plane by the tilt angle.
    const double x0 = x(0);
    x(0) = std::cos(tilt) * x0;
    x(n) = std::sin(tilt) * x0;
    return x;
  };
  return c;
}

ParametricChart sphere_cap(const std::map<std::string, double>& p, int n, int res) {
  const double angle = p.at("angle");
  const double radius = p.at("radius");
  if (!(angle > 0 && angle <= kPi)) throw Error("sphere-cap: angle must lie in (0, pi]");
  if (!(radius > 0)) throw Error("sphere-cap: radius must be positive");
  ParametricChart c;
  c.ambient_dim = n + 1;
  const FaceKind rim = angle >= kPi ? FaceKind::Collapsed : FaceKind::Boundary;
  c.axes.push_back({0.0, angle, FaceKind::Collapsed, rim, res});
  for (const AxisSpec& a : angle_axes(n, res)) c.axes.push_back(a);
  c.map = [n, radius](std::span<const double> s) {
    Vec x(n + 1);
    x.head(n) = std::sin(s[0]) * direction(n, s.subspan(1));
    x(n) = std::cos(s[0]);
    return Vec(radius * x);
  };
  return c;
}

ParametricChart graph(const std::map<std::string, double>& p, int n, int res) {
  const double a = p.at("a");
  const double radius = p.at("radius");
  if (!(radius > 0)) throw Error("graph: radius must be positive");
  ParametricChart c;
  c.ambient_dim = n + 1;
  c.axes.push_back({0.0, radius, FaceKind::Collapsed, FaceKind::Boundary, res});
  for (const AxisSpec& ax : angle_axes(n, res)) c.axes.push_back(ax);
  c.map = [n, a](std::span<const double> s) {
    Vec x(n + 1);
    x.head(n) = s[0] * direction(n, s.subspan(1));
    x(n) = 0.5 * a * (x(0) * x(0) - x(1) * x(1));
    return x;
  };
  return c;
}

ParametricChart catenoid(const std::map<std::string, double>& p, int res) {
  const double waist = p.at("c");
  const double height = p.at("height");
  if (!(waist > 0 && height > 0)) throw Error("catenoid: c and height must be positive");
  ParametricChart c;
  c.ambient_dim = 3;
  c.axes = {{0.0, 2.0 * kPi, FaceKind::Periodic, FaceKind::Periodic, res},
            {-height, height, FaceKind::Boundary, FaceKind::Boundary, res}};
  c.map = [waist](std::span<const double> s) {
    const double rho = waist * std::cosh(s[1] / waist);
    Vec x(3);
    x << rho * std::cos(s[0]), rho * std::sin(s[0]), s[1];
    return x;
  };
  return c;
}

ParametricChart torus_patch(const std::map<std::string, double>& p, int res) {
  const double major = p.at("major");
  const double minor = p.at("minor");
  if (!(major > minor && minor > 0)) throw Error("torus-patch: need major > minor > 0");
  ParametricChart c;
  c.ambient_dim = 3;
  c.axes = {{0.0, kPi / 2.0, FaceKind::Boundary, FaceKind::Boundary, res},
            {-kPi / 2.0, kPi / 2.0, FaceKind::Boundary, FaceKind::Boundary, res}};
  c.map = [major, minor](std::span<const double> s) {
    const double rho = major + minor * std::cos(s[1]);
    Vec x(3);
    x << rho * std::cos(s[0]), rho * std::sin(s[0]), minor * std::sin(s[1]);
    return x;
  };
  return c;
}

}  // namespace

const std::vector<CatalogEntry>& surface_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"flat-disc",
       "flat n-ball of the given radius in R^(n+1), rotated by `tilt` out of the first n axes",
       {{"radius", 1.0, "ball radius"}, {"dim", 2.0, "intrinsic dimension"}, {"tilt", 0.0, "tilt angle in radians"}},
       {2, 3}},
      {"sphere-cap",
       "geodesic cap of the round n-sphere around the last axis; angle = pi gives the full sphere",
       {{"angle", kPi / 3.0, "polar half-angle"}, {"radius", 1.0, "sphere radius"}, {"dim", 2.0, "intrinsic dimension"}},
       {2, 3}},
      {"graph",
       "saddle graph x_n = (a/2)(x0^2 - x1^2) over the n-ball of the given radius",
       {{"a", 0.5, "saddle coefficient"}, {"radius", 1.0, "domain radius"}, {"dim", 2.0, "intrinsic dimension"}},
       {2, 3}},
      {"catenoid",
       "catenoid (c cosh(v/c) cos u, c cosh(v/c) sin u, v), |v| <= height",
       {{"c", 1.0, "waist radius"}, {"height", 0.8, "half height"}, {"dim", 2.0, "intrinsic dimension"}},
       {2}},
      {"torus-patch",
       "outer quarter of a torus of revolution, u in [0, pi/2], v in [-pi/2, pi/2]",
       {{"major", 2.0, "distance from axis to tube center"},
        {"minor", 0.5, "tube radius"},
        {"dim", 2.0, "intrinsic dimension"}},
       {2}},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const CatalogEntry& e : surface_catalog()) {
    if (e.id == id) return e;
  }
  std::string known;
  for (const CatalogEntry& e : surface_catalog()) known += (known.empty() ? "" : ", ") + e.id;
  throw Error("unknown surface '" + id + "' (known: " + known + ")");
}

std::map<std::string, double> resolve_params(const std::string& id, const std::map<std::string, double>& given) {
  const CatalogEntry& e = catalog_entry(id);
  std::map<std::string, double> out;
  for (const CatalogParam& p : e.params) out[p.name] = p.default_value;
  for (const auto& [name, value] : given) {
    if (!out.count(name)) throw Error("surface '" + id + "': unknown parameter '" + name + "'");
    if (!std::isfinite(value)) throw Error("surface '" + id + "': parameter '" + name + "' is not finite");
    out[name] = value;
  }
  return out;
}

ParametricChart make_chart(const std::string& id, const std::map<std::string, double>& params, int resolution) {
  const CatalogEntry& e = catalog_entry(id);
  const auto p = resolve_params(id, params);
  const int n = dim_param(p, e);
  if (id == "flat-disc") return flat_disc(p, n, resolution);
  if (id == "sphere-cap") return sphere_cap(p, n, resolution);
  if (id == "graph") return graph(p, n, resolution);
  if (id == "catenoid") return catenoid(p, resolution);
  return torus_patch(p, resolution);
}

SampledImmersion make_surface(const std::string& id, const std::map<std::string, double>& params, int resolution) {
  SurfaceInfo info{id, resolve_params(id, params)};
  return sample_immersion(make_chart(id, params, resolution), std::move(info));
}

}  // namespace smot
