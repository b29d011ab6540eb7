#pragma once

#include "constants.hpp"
#include "diagnostics.hpp"
#include "dual.hpp"
#include "error.hpp"
#include "lifshitz_numeric.hpp"
#include "material_config.hpp"
#include "materials.hpp"
#include "mu_dispersion.hpp"
#include "parallel.hpp"
#include "perturbation_drude.hpp"
#include "perturbation_plasma.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"
#include "validity.hpp"
