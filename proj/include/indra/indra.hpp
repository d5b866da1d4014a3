#pragma once

// Umbrella header.

#include "indra/build.hpp"
#include "indra/cost.hpp"
#include "indra/errors.hpp"
#include "indra/io.hpp"
#include "indra/match.hpp"
#include "indra/ops.hpp"
#include "indra/probe.hpp"
#include "indra/synth.hpp"
#include "indra/types.hpp"
#include "indra/verify.hpp"
#include "indra/version.hpp"
