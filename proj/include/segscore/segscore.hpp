#ifndef SEGSCORE_SEGSCORE_HPP
#define SEGSCORE_SEGSCORE_HPP

// Umbrella header: the full segmentation-evaluation toolkit.

#include "segscore/boundary.hpp"
#include "segscore/boundary_distance.hpp"
#include "segscore/confusion.hpp"
#include "segscore/core.hpp"
#include "segscore/distance_field.hpp"
#include "segscore/evaluate.hpp"
#include "segscore/fixtures.hpp"
#include "segscore/image_io.hpp"
#include "segscore/info_consistency.hpp"
#include "segscore/overlap.hpp"
#include "segscore/relevance.hpp"
#include "segscore/report.hpp"

namespace segscore {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // SEGSCORE_SEGSCORE_HPP
