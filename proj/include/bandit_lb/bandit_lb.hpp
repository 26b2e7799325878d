#pragma once
/// \file bandit_lb.hpp
/// Umbrella header for the bandit lower-bound toolkit.

#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "divergence.hpp"
#include "errors.hpp"
#include "exact_verifier.hpp"
#include "lower_bounds.hpp"
#include "models.hpp"
#include "random.hpp"
#include "simulator.hpp"
#include "strategies.hpp"
#include "verification.hpp"
