#pragma once

// Umbrella header: exact and quadrature winning probabilities for
// winner-take-all computation contests, seeded Monte Carlo oracles, the
// pool-choosing game, reinvestment dynamics, and proportionality asymptotics.

#include "contestlab/asymptotics.hpp"
#include "contestlab/contest.hpp"
#include "contestlab/counter_rng.hpp"
#include "contestlab/dynamics.hpp"
#include "contestlab/errors.hpp"
#include "contestlab/exact_oracle.hpp"
#include "contestlab/gauss_legendre.hpp"
#include "contestlab/pooling.hpp"
#include "contestlab/sampling.hpp"
#include "contestlab/win_probabilities.hpp"
