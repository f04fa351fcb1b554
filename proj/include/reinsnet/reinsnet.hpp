#pragma once

#include "reinsnet/allocator.hpp"
#include "reinsnet/closedform.hpp"
#include "reinsnet/error.hpp"
#include "reinsnet/measures.hpp"
#include "reinsnet/orders.hpp"
#include "reinsnet/parallel.hpp"
#include "reinsnet/rng.hpp"
#include "reinsnet/scenarios.hpp"
#include "reinsnet/search.hpp"
#include "reinsnet/treaties.hpp"
