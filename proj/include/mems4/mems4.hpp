#pragma once

#define MEMS4_VERSION "1.0.0"

#include "mems4/banded.hpp"
#include "mems4/eig.hpp"
#include "mems4/errors.hpp"
#include "mems4/experiments.hpp"
#include "mems4/grid.hpp"
#include "mems4/hyperbolic.hpp"
#include "mems4/io.hpp"
#include "mems4/model.hpp"
#include "mems4/newton.hpp"
#include "mems4/operators.hpp"
#include "mems4/parabolic.hpp"
#include "mems4/steady.hpp"
#include "mems4/trajectory.hpp"
