// Umbrella header for the whole library.
#pragma once

#include "floyd/automaton.hpp"
#include "floyd/chain.hpp"
#include "floyd/convert.hpp"
#include "floyd/determinize.hpp"
#include "floyd/grammar.hpp"
#include "floyd/omega.hpp"
#include "floyd/oracle.hpp"
#include "floyd/prec.hpp"
