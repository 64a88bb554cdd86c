#pragma once

#include "mugi/approx.hpp"
#include "mugi/bf16.hpp"
#include "mugi/config.hpp"
#include "mugi/cost.hpp"
#include "mugi/event_sim.hpp"
#include "mugi/experiment.hpp"
#include "mugi/gemm.hpp"
#include "mugi/lut.hpp"
#include "mugi/lut_io.hpp"
#include "mugi/nonlinear.hpp"
#include "mugi/perf.hpp"
#include "mugi/schedule.hpp"
#include "mugi/softmax.hpp"
#include "mugi/temporal.hpp"
#include "mugi/workload.hpp"
