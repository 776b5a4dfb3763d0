#pragma once

#include "stackbench/config.hpp"
#include "stackbench/data.hpp"
#include "stackbench/execution.hpp"
#include "stackbench/geometry.hpp"
#include "stackbench/harness.hpp"
#include "stackbench/hull.hpp"
#include "stackbench/leaderboard.hpp"
#include "stackbench/matrix.hpp"
#include "stackbench/physics.hpp"
#include "stackbench/scoring.hpp"
#include "stackbench/solvers.hpp"
#include "stackbench/types.hpp"
