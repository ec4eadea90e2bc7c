#pragma once

#include "qramsim/dense_state.hpp"
#include "qramsim/ghz_analytics.hpp"
#include "qramsim/noise.hpp"
#include "qramsim/oracle.hpp"
#include "qramsim/protocol_sim.hpp"
#include "qramsim/qram_model.hpp"
#include "qramsim/random.hpp"
#include "qramsim/sweep.hpp"
#include "qramsim/validation.hpp"
#include "qramsim/validation_report.hpp"
