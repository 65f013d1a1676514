#pragma once

#include "dttgf/config.hpp"
#include "dttgf/decode.hpp"
#include "dttgf/error.hpp"
#include "dttgf/geometry.hpp"
#include "dttgf/heatmap.hpp"
#include "dttgf/instance.hpp"
#include "dttgf/io.hpp"
#include "dttgf/mcts.hpp"
#include "dttgf/merge.hpp"
#include "dttgf/neighbors.hpp"
#include "dttgf/pipeline.hpp"
#include "dttgf/random.hpp"
#include "dttgf/sampling.hpp"
#include "dttgf/subsolver.hpp"
#include "dttgf/two_opt.hpp"
#include "dttgf/warmup.hpp"
