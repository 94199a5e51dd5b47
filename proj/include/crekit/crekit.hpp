#pragma once

#include "crekit/decision.hpp"
#include "crekit/engine.hpp"
#include "crekit/error.hpp"
#include "crekit/partition.hpp"
#include "crekit/syntax.hpp"
#include "crekit/unambiguity.hpp"
