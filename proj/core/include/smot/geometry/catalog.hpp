#pragma once

#include <map>
#include <string>
#include <vector>

#include "smot/geometry/immersion.hpp"

namespace smot {

struct CatalogParam {
  std::string name;
  double default_value;
  std::string doc;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::vector<CatalogParam> params;
  std::vector<int> dims;  // supported intrinsic dimensions
};

// "flat-disc", "sphere-cap", "graph", "catenoid", "torus-patch".
const std::vector<CatalogEntry>& surface_catalog();
const CatalogEntry& catalog_entry(const std::string& id);

// Fills in defaults and rejects unknown parameter names.
std::map<std::string, double> resolve_params(const std::string& id, const std::map<std::string, double>& given);

ParametricChart make_chart(const std::string& id, const std::map<std::string, double>& params, int resolution);
SampledImmersion make_surface(const std::string& id, const std::map<std::string, double>& params, int resolution);

}  // namespace smot
