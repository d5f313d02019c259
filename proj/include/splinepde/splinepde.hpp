#pragma once

#include "splinepde/assembly.hpp"
#include "splinepde/bernstein.hpp"
#include "splinepde/common.hpp"
#include "splinepde/constraints.hpp"
#include "splinepde/harness.hpp"
#include "splinepde/mesh.hpp"
#include "splinepde/problems.hpp"
#include "splinepde/quadrature.hpp"
#include "splinepde/saddle_solver.hpp"
