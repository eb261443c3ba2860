#pragma once

#include "coupling.hpp"
#include "degree_dist.hpp"
#include "error.hpp"
#include "exact_oracle.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "kernel.hpp"
#include "kernel_json.hpp"
#include "linalg.hpp"
#include "normal_bound.hpp"
#include "parallel.hpp"
#include "poisson_bound.hpp"
#include "rng.hpp"
#include "verify.hpp"
