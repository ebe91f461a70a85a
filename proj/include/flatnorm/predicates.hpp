#pragma once

#include "flatnorm/geometry.hpp"

namespace flatnorm {

// Sign of det[b - a, c - a]: +1 when a, b, c turn counter-clockwise.
// Exact for all finite doubles.
int orient2d(Point2 a, Point2 b, Point2 c);

// +1 when d lies strictly inside the circle through the counter-clockwise
// triangle a, b, c; exact for all finite doubles.
int incircle(Point2 a, Point2 b, Point2 c, Point2 d);

// For collinear a, b, p: true when p lies on the closed segment ab.
bool on_closed_segment(Point2 a, Point2 b, Point2 p);

}  // namespace flatnorm
