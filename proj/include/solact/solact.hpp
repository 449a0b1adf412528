#pragma once

#include "solact/action.hpp"
#include "solact/errors.hpp"
#include "solact/io.hpp"
#include "solact/models.hpp"
#include "solact/pde.hpp"
#include "solact/quadrature.hpp"
#include "solact/reduction.hpp"
#include "solact/run_config.hpp"
#include "solact/verify.hpp"
