#pragma once

#include "smartgrad/basis.hpp"
#include "smartgrad/bench.hpp"
#include "smartgrad/bfgs.hpp"
#include "smartgrad/core.hpp"
#include "smartgrad/direction_history.hpp"
#include "smartgrad/fd_scheme.hpp"
#include "smartgrad/finite_difference.hpp"
#include "smartgrad/metrics.hpp"
#include "smartgrad/mgs.hpp"
#include "smartgrad/objective.hpp"
#include "smartgrad/smart_estimator.hpp"
#include "smartgrad/test_functions.hpp"
