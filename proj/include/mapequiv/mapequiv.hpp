#pragma once

#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"
#include "mapequiv/matrix.hpp"
#include "mapequiv/sample_map.hpp"
#include "mapequiv/group.hpp"
#include "mapequiv/signature.hpp"
#include "mapequiv/equivalence.hpp"
#include "mapequiv/invariants.hpp"
#include "mapequiv/orbit_oracle.hpp"
