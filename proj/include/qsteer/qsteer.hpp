#pragma once

// Umbrella header for the qsteer steering-inequality library.

#include "errors.hpp"      // IWYU pragma: export
#include "rng.hpp"         // IWYU pragma: export
#include "parallel.hpp"    // IWYU pragma: export
#include "numerics.hpp"    // IWYU pragma: export
#include "bases.hpp"       // IWYU pragma: export
#include "steering.hpp"    // IWYU pragma: export
#include "models.hpp"      // IWYU pragma: export
#include "grid.hpp"        // IWYU pragma: export
#include "io_json.hpp"     // IWYU pragma: export
#include "io_csv.hpp"      // IWYU pragma: export
