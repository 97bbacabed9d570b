#pragma once

#include "uavdeploy/error.hpp"
#include "uavdeploy/point.hpp"
#include "uavdeploy/numeric.hpp"
#include "uavdeploy/density.hpp"
#include "uavdeploy/quadrature.hpp"
#include "uavdeploy/cost_model.hpp"
#include "uavdeploy/static_placement.hpp"
#include "uavdeploy/trajectory.hpp"
#include "uavdeploy/dynamic_extremal.hpp"
#include "uavdeploy/subproblem.hpp"
#include "uavdeploy/trajectory_optimizer.hpp"
