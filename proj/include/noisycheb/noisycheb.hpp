#pragma once

#include "noisycheb/analysis.hpp"
#include "noisycheb/cheb.hpp"
#include "noisycheb/cp.hpp"
#include "noisycheb/ls_oracle.hpp"
#include "noisycheb/pipeline.hpp"
#include "noisycheb/rng.hpp"
