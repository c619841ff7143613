#pragma once

#include "ebdg/diagnostics.hpp"
#include "ebdg/experiment.hpp"
#include "ebdg/fluxes.hpp"
#include "ebdg/legendre.hpp"
#include "ebdg/linalg.hpp"
#include "ebdg/mesh.hpp"
#include "ebdg/operator.hpp"
#include "ebdg/problem.hpp"
#include "ebdg/quadrature.hpp"
#include "ebdg/sdc.hpp"
#include "ebdg/state.hpp"
