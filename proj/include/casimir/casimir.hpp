// Umbrella header.
#pragma once

#include "casimir/asymptotics.hpp"
#include "casimir/core.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/io.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"
#include "casimir/sweep.hpp"
#include "casimir/thermo.hpp"
