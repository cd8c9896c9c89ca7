// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#pragma once

#include "strokebench/augment.hpp"
#include "strokebench/baselines.hpp"
#include "strokebench/boundary_metrics.hpp"
#include "strokebench/image.hpp"
#include "strokebench/image_io.hpp"
#include "strokebench/losses.hpp"
#include "strokebench/morphology.hpp"
#include "strokebench/parallel.hpp"
#include "strokebench/protocol.hpp"
#include "strokebench/region_metrics.hpp"
#include "strokebench/report_io.hpp"
#include "strokebench/rng.hpp"
#include "strokebench/stats.hpp"
