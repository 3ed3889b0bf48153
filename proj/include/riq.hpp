#pragma once

// Umbrella header: exact simulation of repeated quantum interaction models,
// effective generators for the weak-coupling / vanishing-duration / critical
// scaling regimes, and the fully explicit two-level case.

#include "riq/complex_matrix.hpp"
#include "riq/expm.hpp"
#include "riq/lindblad.hpp"
#include "riq/model.hpp"
#include "riq/model_io.hpp"
#include "riq/perturb.hpp"
#include "riq/qubit.hpp"
#include "riq/reduced.hpp"
#include "riq/regimes.hpp"
#include "riq/report_io.hpp"
#include "riq/rng.hpp"
#include "riq/spectral.hpp"
#include "riq/superoperator.hpp"
#include "riq/version.hpp"
