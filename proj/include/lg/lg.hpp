#pragma once

#include "lg/adversary.hpp"
#include "lg/bits.hpp"
#include "lg/boolean_function.hpp"
#include "lg/combinators.hpp"
#include "lg/complexity.hpp"
#include "lg/corpus.hpp"
#include "lg/costmodel.hpp"
#include "lg/expand.hpp"
#include "lg/json_io.hpp"
#include "lg/learning_graph.hpp"
#include "lg/oracles.hpp"
#include "lg/parallel.hpp"
#include "lg/superedges.hpp"
#include "lg/triangle.hpp"
#include "lg/validate.hpp"
#include "lg/weight_rule.hpp"
