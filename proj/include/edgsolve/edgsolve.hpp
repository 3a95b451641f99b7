#pragma once

#include "edgsolve/analysis.hpp"
#include "edgsolve/coloring.hpp"
#include "edgsolve/errors.hpp"
#include "edgsolve/graph.hpp"
#include "edgsolve/kernel.hpp"
#include "edgsolve/oracle.hpp"
#include "edgsolve/program.hpp"
