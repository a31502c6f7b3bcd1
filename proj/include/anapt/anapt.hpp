#pragma once

#include "anapt/baselines.hpp"
#include "anapt/bottleneck.hpp"
#include "anapt/calibration.hpp"
#include "anapt/core.hpp"
#include "anapt/estimator.hpp"
#include "anapt/io.hpp"
#include "anapt/noise_models.hpp"
#include "anapt/persistence.hpp"
#include "anapt/signals.hpp"
#include "anapt/special.hpp"
