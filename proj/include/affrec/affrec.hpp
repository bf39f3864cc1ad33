#pragma once

// Umbrella header.

#include "affrec/acceptance.hpp"
#include "affrec/estimators.hpp"
#include "affrec/experiment.hpp"
#include "affrec/exterior.hpp"
#include "affrec/linalg.hpp"
#include "affrec/models.hpp"
#include "affrec/parallel.hpp"
#include "affrec/projective.hpp"
#include "affrec/registry.hpp"
#include "affrec/rk1.hpp"
#include "affrec/rng.hpp"
#include "affrec/simulate.hpp"
#include "affrec/stats.hpp"
