#pragma once

// Everything at once.

#include "cantordim/errors.hpp"
#include "cantordim/numeric.hpp"
#include "cantordim/gap_sequence.hpp"
#include "cantordim/cantor.hpp"
#include "cantordim/gauge.hpp"
#include "cantordim/tail_analytics.hpp"
#include "cantordim/classification.hpp"
#include "cantordim/equivalence.hpp"
#include "cantordim/synthesis.hpp"
#include "cantordim/spec_io.hpp"
