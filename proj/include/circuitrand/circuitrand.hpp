#pragma once

#include "circuitrand/analysis.hpp"
#include "circuitrand/circuits.hpp"
#include "circuitrand/contrast.hpp"
#include "circuitrand/design_catalog.hpp"
#include "circuitrand/error.hpp"
#include "circuitrand/exact_linalg.hpp"
#include "circuitrand/io.hpp"
#include "circuitrand/randomisation.hpp"
#include "circuitrand/unimodular.hpp"
