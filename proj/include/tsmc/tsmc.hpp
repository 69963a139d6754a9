#pragma once

#include "tsmc/assignment.hpp"
#include "tsmc/dataset.hpp"
#include "tsmc/errors.hpp"
#include "tsmc/losses.hpp"
#include "tsmc/matrix.hpp"
#include "tsmc/metrics.hpp"
#include "tsmc/model.hpp"
#include "tsmc/rng.hpp"
#include "tsmc/semisup.hpp"
#include "tsmc/solver.hpp"
#include "tsmc/sparse_vector.hpp"
#include "tsmc/synth.hpp"
#include "tsmc/taxonomy.hpp"
#include "tsmc/transportation.hpp"
