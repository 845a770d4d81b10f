#pragma once

#include "liouville/constructors.hpp"
#include "liouville/criteria.hpp"
#include "liouville/estimates.hpp"
#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"
#include "liouville/params.hpp"
#include "liouville/pieces.hpp"
#include "liouville/radial.hpp"
#include "liouville/serialization.hpp"
#include "liouville/solution.hpp"
