#pragma once

#include "sparsetrig/approx.hpp"
#include "sparsetrig/besov.hpp"
#include "sparsetrig/harness.hpp"
#include "sparsetrig/probbounds.hpp"
#include "sparsetrig/rng.hpp"
#include "sparsetrig/sparsify.hpp"
#include "sparsetrig/trigpoly.hpp"
#include "sparsetrig/vdp.hpp"
