#pragma once

#include "kglab/rational.hpp"
#include "kglab/arith.hpp"
#include "kglab/circle.hpp"
#include "kglab/dirichlet.hpp"
#include "kglab/approx_function.hpp"
#include "kglab/sets.hpp"
#include "kglab/arc_kernel.hpp"
#include "kglab/parallel.hpp"
#include "kglab/analysis.hpp"
#include "kglab/rng.hpp"
#include "kglab/dichotomy.hpp"
#include "kglab/config.hpp"
#include "kglab/report.hpp"
#include "kglab/pins.hpp"
#include "kglab/verify.hpp"
