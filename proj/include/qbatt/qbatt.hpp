// qbatt.hpp — Umbrella header for the driven two-qubit quantum battery library.

#pragma once

#include "qbatt/config.hpp"
#include "qbatt/error.hpp"
#include "qbatt/liouville.hpp"
#include "qbatt/matcore.hpp"
#include "qbatt/model.hpp"
#include "qbatt/observe.hpp"
#include "qbatt/presets.hpp"
#include "qbatt/reservoir.hpp"
#include "qbatt/spectra.hpp"
#include "qbatt/sweep.hpp"
