#pragma once

#include "earc/geometry.hpp"
#include "earc/cspace.hpp"
#include "earc/problem.hpp"
#include "earc/paths.hpp"
#include "earc/roadmap.hpp"
#include "earc/subproblem.hpp"
#include "earc/local_solvers.hpp"
#include "earc/experience.hpp"
#include "earc/planners.hpp"
#include "earc/io.hpp"
#include "earc/bench.hpp"
