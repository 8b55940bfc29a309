#pragma once

// Convenience header pulling in the whole library.

#include "sasbp/errors.hpp"
#include "sasbp/gadgets.hpp"
#include "sasbp/io.hpp"
#include "sasbp/oracle.hpp"
#include "sasbp/planner02.hpp"
#include "sasbp/preprocess.hpp"
#include "sasbp/random_instances.hpp"
#include "sasbp/restrictions.hpp"
#include "sasbp/sas_core.hpp"
#include "sasbp/steiner.hpp"
