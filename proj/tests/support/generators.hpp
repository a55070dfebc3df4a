#pragma once

#include <random>
#include <vector>

#include "leuko/edges.hpp"
#include "leuko/fuzzy.hpp"
#include "leuko/shapes.hpp"

namespace leuko::testing {

/// Pixel chain along a random line or circular arc, at least 3 points.
std::vector<Pixel> random_chain(std::mt19937_64& rng, int extent = 80);

shapes::CurveSegment random_segment(std::mt19937_64& rng, int extent = 80);

/// Segment with given endpoints and one tangent at both ends.
shapes::CurveSegment synthetic_segment(Pixel a, Pixel b, double tangent);

fuzzy::FuzzyTerm random_term(std::mt19937_64& rng, fuzzy::Shape shape);

fuzzy::Degrees random_degrees(std::mt19937_64& rng, const fuzzy::FuzzyModel& model);

/// Random edge-like mask: a few arcs, lines and blobs.
BinaryMask random_edge_mask(std::mt19937_64& rng, int width, int height);

}  // namespace leuko::testing
