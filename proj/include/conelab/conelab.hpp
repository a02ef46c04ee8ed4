#pragma once

// Convenience umbrella: pulls in the whole library.

#include "conelab/affine.hpp"
#include "conelab/centroid_section.hpp"
#include "conelab/characterize.hpp"
#include "conelab/cone.hpp"
#include "conelab/cone_io.hpp"
#include "conelab/directions.hpp"
#include "conelab/errors.hpp"
#include "conelab/families.hpp"
#include "conelab/gamma.hpp"
#include "conelab/matrix.hpp"
#include "conelab/optimize.hpp"
#include "conelab/parallel.hpp"
#include "conelab/quadric.hpp"
#include "conelab/report.hpp"
#include "conelab/rng.hpp"
#include "conelab/section.hpp"
#include "conelab/vec.hpp"
