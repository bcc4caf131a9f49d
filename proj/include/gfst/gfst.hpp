// gfst.hpp -- umbrella header.

#ifndef GFST_GFST_HPP
#define GFST_GFST_HPP

#include "core.hpp"
#include "text.hpp"
#include "regex.hpp"
#include "oracle.hpp"
#include "glushkov.hpp"
#include "range_index.hpp"
#include "eval.hpp"
#include "analysis.hpp"
#include "interleave.hpp"
#include "artifact.hpp"
#include "dot.hpp"

#endif // GFST_GFST_HPP
