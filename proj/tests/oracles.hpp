#pragma once

#include <array>
#include <span>

#include "flatnorm/geometry.hpp"

namespace oracle {

// Hausdorff distance from dense samples on every segment, refined by a
// golden-section search around the best sample.
double sampled_hausdorff(std::span<const flatnorm::Segment> a, std::span<const flatnorm::Segment> b,
                         int samples_per_segment = 10000);

// Separating-axis test: true when the two triangles share no interior point.
bool interiors_disjoint(const std::array<flatnorm::Point2, 3>& a, const std::array<flatnorm::Point2, 3>& b);

}  // namespace oracle
