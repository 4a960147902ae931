#pragma once

#include "epsreg/error_metrics.hpp"
#include "epsreg/fem.hpp"
#include "epsreg/mesh.hpp"
#include "epsreg/problem.hpp"
#include "epsreg/quadrature.hpp"
#include "epsreg/solver.hpp"
#include "epsreg/sparse.hpp"
#include "epsreg/svg_plot.hpp"
#include "epsreg/sweep.hpp"
#include "epsreg/types.hpp"
