#pragma once

#include "tractormass/core.hpp"
#include "tractormass/chart.hpp"
#include "tractormass/harmonics.hpp"
#include "tractormass/families.hpp"
#include "tractormass/tensors.hpp"
#include "tractormass/tractor.hpp"
#include "tractormass/asymptotics.hpp"
#include "tractormass/cocycle.hpp"
#include "tractormass/quadrature.hpp"
#include "tractormass/mass.hpp"
#include "tractormass/cli.hpp"
