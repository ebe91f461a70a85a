#pragma once

#include <string>

#include "flatnorm/geometry.hpp"

namespace flatnorm {

// Reads a FeatureCollection of LineString features. Each consecutive pair of
// coordinates becomes one raw segment; the network is not noded here.
// Throws InputError on unreadable files or unsupported geometry.
PlanarNetwork load_geojson(const std::string& path, double earth_radius_km = 6371.0);
PlanarNetwork parse_geojson(const std::string& text, double earth_radius_km = 6371.0);

// One LineString feature per segment.
std::string to_geojson(const PlanarNetwork& net);
void save_geojson(const PlanarNetwork& net, const std::string& path);

}  // namespace flatnorm
