#pragma once

// Online kernel graph change-point detection.

#include "dictionary.hpp"
#include "detector.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "synth.hpp"
