#pragma once

#include "baseline.hpp"
#include "config.hpp"
#include "device.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "readout.hpp"
#include "reservoir.hpp"
#include "rng.hpp"
#include "tasks.hpp"
