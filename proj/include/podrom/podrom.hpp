#pragma once

// Umbrella header.

#include "podrom/csv.hpp"
#include "podrom/errors.hpp"
#include "podrom/fdsolver.hpp"
#include "podrom/grid.hpp"
#include "podrom/harness.hpp"
#include "podrom/linalg.hpp"
#include "podrom/pod.hpp"
#include "podrom/rom.hpp"
