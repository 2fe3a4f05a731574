#pragma once

// Everything in one include.

#include "adaprox/numkit/types.hpp"
#include "adaprox/numkit/format.hpp"
#include "adaprox/numkit/linear_map.hpp"
#include "adaprox/numkit/norm.hpp"
#include "adaprox/numkit/io.hpp"
#include "adaprox/oracles/smooth.hpp"
#include "adaprox/oracles/prox.hpp"
#include "adaprox/curvature.hpp"
#include "adaprox/trace.hpp"
#include "adaprox/pg/stepsize.hpp"
#include "adaprox/pg/solvers.hpp"
#include "adaprox/pg/monitors.hpp"
#include "adaprox/pd/problem.hpp"
#include "adaprox/pd/steps.hpp"
#include "adaprox/pd/solvers.hpp"
#include "adaprox/pd/monitors.hpp"
#include "adaprox/bench/generators.hpp"
#include "adaprox/bench/problems.hpp"
#include "adaprox/bench/spec.hpp"
#include "adaprox/bench/run.hpp"
