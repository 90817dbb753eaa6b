#pragma once

#include "tenet/errors.hpp"
#include "tenet/term.hpp"
#include "tenet/expr.hpp"
#include "tenet/printer.hpp"
#include "tenet/parser.hpp"
#include "tenet/unify.hpp"
#include "tenet/occurrence.hpp"
#include "tenet/normalize.hpp"
#include "tenet/evaluate.hpp"
#include "tenet/knowledge_base.hpp"
#include "tenet/goal_graph.hpp"
#include "tenet/refinement.hpp"
#include "tenet/session_io.hpp"
#include "tenet/replay.hpp"
#include "tenet/report.hpp"
#include "tenet/store.hpp"
