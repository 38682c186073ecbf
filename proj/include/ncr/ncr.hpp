#pragma once

// Umbrella header for the retrieval pipeline library.

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/eval.hpp"
#include "ncr/index.hpp"
#include "ncr/io.hpp"
#include "ncr/pairs.hpp"
#include "ncr/pca.hpp"
#include "ncr/projection.hpp"
#include "ncr/rng.hpp"
#include "ncr/synth.hpp"
