#pragma once

#include "mcid/chain.hpp"
#include "mcid/constants.hpp"
#include "mcid/errors.hpp"
#include "mcid/generators.hpp"
#include "mcid/identity.hpp"
#include "mcid/iid_test.hpp"
#include "mcid/metrics.hpp"
#include "mcid/partition.hpp"
#include "mcid/properties.hpp"
#include "mcid/sampling.hpp"
#include "mcid/simplex.hpp"
#include "mcid/types.hpp"
