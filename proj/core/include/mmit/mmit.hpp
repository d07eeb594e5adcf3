#pragma once

#include "mmit/bench.hpp"
#include "mmit/breakpoint_tree.hpp"
#include "mmit/data_io.hpp"
#include "mmit/eval.hpp"
#include "mmit/interval.hpp"
#include "mmit/piece.hpp"
#include "mmit/solver.hpp"
#include "mmit/split.hpp"
#include "mmit/tree.hpp"
