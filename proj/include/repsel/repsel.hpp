#pragma once

#include "repsel/benchmark.hpp"
#include "repsel/coverage.hpp"
#include "repsel/error.hpp"
#include "repsel/greedy.hpp"
#include "repsel/kmedoids.hpp"
#include "repsel/maximin.hpp"
#include "repsel/minimax.hpp"
#include "repsel/objectives.hpp"
#include "repsel/parallel.hpp"
#include "repsel/point_set.hpp"
#include "repsel/random.hpp"
#include "repsel/rng.hpp"
#include "repsel/selection.hpp"
#include "repsel/tsne.hpp"
#include "repsel/tsplib.hpp"
