#pragma once

#include "eventcast/baselines.hpp"
#include "eventcast/daily_model.hpp"
#include "eventcast/data_io.hpp"
#include "eventcast/errors.hpp"
#include "eventcast/event_model.hpp"
#include "eventcast/event_regression.hpp"
#include "eventcast/fit.hpp"
#include "eventcast/metrics.hpp"
#include "eventcast/pipeline.hpp"
#include "eventcast/predictor.hpp"
#include "eventcast/time_series.hpp"
