#pragma once

// Umbrella header for the slicing toolkit.

#include "dslice/ast.hpp"
#include "dslice/cfg.hpp"
#include "dslice/control_deps.hpp"
#include "dslice/dataflow.hpp"
#include "dslice/error.hpp"
#include "dslice/interp.hpp"
#include "dslice/label.hpp"
#include "dslice/oracle.hpp"
#include "dslice/parser.hpp"
#include "dslice/pdg.hpp"
#include "dslice/printer.hpp"
#include "dslice/slicer.hpp"
#include "dslice/stats.hpp"
#include "dslice/transform.hpp"
