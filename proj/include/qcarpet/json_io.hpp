#pragma once

#include <string>

#include "json.hpp"
#include "qcarpet/carpet.hpp"
#include "qcarpet/circle_map.hpp"
#include "qcarpet/extension.hpp"
#include "qcarpet/modulus.hpp"
#include "qcarpet/plane_map.hpp"
#include "qcarpet/rigidity.hpp"

namespace qcarpet {

using json = nlohmann::json;

json to_json(const Region& region);
Region region_from_json(const json& j);

json to_json(const ClosedCurve& curve);
ClosedCurve curve_from_json(const json& j);

json to_json(const Carpet& S);
Carpet carpet_from_json(const json& j);

json to_json(const PlaneMap& m);
PlaneMap plane_map_from_json(const json& j);

json to_json(const Density& d);
Density density_from_json(const json& j);

json to_json(const ModulusResult& r);

json to_json(const TowerManifest& m);

json to_json(const RigidityReport& r);

/// CSV with header "angle,image", angles in radians.
std::string circle_map_to_csv(const CircleMap& m);
CircleMap circle_map_from_csv(const std::string& text);

json to_json(const CircleMap& m);
CircleMap circle_map_from_json(const json& j);

json to_json(const CarpetBoundaryData& d);
CarpetBoundaryData carpet_boundary_data_from_json(const json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace qcarpet
