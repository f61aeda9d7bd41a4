#pragma once

#include "bmatch/bench.hpp"
#include "bmatch/compare.hpp"
#include "bmatch/core.hpp"
#include "bmatch/errors.hpp"
#include "bmatch/hungarian.hpp"
#include "bmatch/io.hpp"
#include "bmatch/oracle.hpp"
#include "bmatch/solver.hpp"
