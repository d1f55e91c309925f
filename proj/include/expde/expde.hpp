// Umbrella header.

#pragma once

#include "expde/analysis.hpp"
#include "expde/config.hpp"
#include "expde/field.hpp"
#include "expde/fft.hpp"
#include "expde/grid.hpp"
#include "expde/io.hpp"
#include "expde/log.hpp"
#include "expde/nonlinearity.hpp"
#include "expde/norms.hpp"
#include "expde/numeric.hpp"
#include "expde/runner.hpp"
#include "expde/series.hpp"
#include "expde/time_integration.hpp"
