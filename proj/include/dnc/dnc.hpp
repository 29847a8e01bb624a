#pragma once

#include "dnc/brute_force.hpp"
#include "dnc/community.hpp"
#include "dnc/error.hpp"
#include "dnc/external_solver.hpp"
#include "dnc/generators.hpp"
#include "dnc/graph.hpp"
#include "dnc/io.hpp"
#include "dnc/nelder_mead.hpp"
#include "dnc/parallel.hpp"
#include "dnc/pipeline.hpp"
#include "dnc/polynomial.hpp"
#include "dnc/qaoa.hpp"
#include "dnc/reducer.hpp"
#include "dnc/walsh_hadamard.hpp"
#include "dnc/wcnf.hpp"
