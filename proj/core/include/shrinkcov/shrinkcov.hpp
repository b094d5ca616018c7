#pragma once

#include "shrinkcov/beamform.hpp"
#include "shrinkcov/complexcov.hpp"
#include "shrinkcov/error.hpp"
#include "shrinkcov/estimators.hpp"
#include "shrinkcov/models.hpp"
#include "shrinkcov/montecarlo.hpp"
#include "shrinkcov/parallel.hpp"
#include "shrinkcov/rng.hpp"
#include "shrinkcov/verification.hpp"
