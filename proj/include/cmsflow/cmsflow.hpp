#pragma once

// Umbrella header.

#include "cmsflow/integrator.hpp"
#include "cmsflow/orthopoly.hpp"
#include "cmsflow/polyroots.hpp"
#include "cmsflow/rational.hpp"
#include "cmsflow/root_system.hpp"
#include "cmsflow/sde.hpp"
#include "cmsflow/symflow.hpp"
#include "cmsflow/trajectory.hpp"
