#pragma once

#include "pha/delaunay.hpp"
#include "pha/error.hpp"
#include "pha/experiment.hpp"
#include "pha/generate.hpp"
#include "pha/geometry.hpp"
#include "pha/graph.hpp"
#include "pha/high_level.hpp"
#include "pha/io.hpp"
#include "pha/knowledge.hpp"
#include "pha/metrics_json.hpp"
#include "pha/multi_agent.hpp"
#include "pha/navigation.hpp"
#include "pha/oracles.hpp"
#include "pha/rng.hpp"
