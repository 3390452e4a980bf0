#pragma once

// Umbrella header for the full pipeline: serialization, attention-tensor
// operations, spectral checks, head screening, synthesis, and calibration.

#include "slash/adjacency.hpp"
#include "slash/attention.hpp"
#include "slash/binarize.hpp"
#include "slash/budget.hpp"
#include "slash/calibrate.hpp"
#include "slash/common.hpp"
#include "slash/entropy.hpp"
#include "slash/graph.hpp"
#include "slash/headscan.hpp"
#include "slash/manifest.hpp"
#include "slash/otsu.hpp"
#include "slash/pgm.hpp"
#include "slash/probe.hpp"
#include "slash/serialize.hpp"
#include "slash/sharpen.hpp"
#include "slash/spectral.hpp"
#include "slash/synth.hpp"
#include "slash/tensor_io.hpp"
