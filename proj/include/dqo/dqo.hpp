#pragma once

#include "dqo/algo.hpp"
#include "dqo/bench.hpp"
#include "dqo/cost.hpp"
#include "dqo/grouping.hpp"
#include "dqo/join.hpp"
#include "dqo/mav.hpp"
#include "dqo/optimizer.hpp"
#include "dqo/plan.hpp"
#include "dqo/props.hpp"
#include "dqo/relation.hpp"
#include "dqo/rng.hpp"
#include "dqo/workload.hpp"
