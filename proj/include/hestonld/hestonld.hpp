#pragma once

#include "hestonld/asymptotics.hpp"
#include "hestonld/cgf.hpp"
#include "hestonld/commands.hpp"
#include "hestonld/errors.hpp"
#include "hestonld/extended_real.hpp"
#include "hestonld/format.hpp"
#include "hestonld/interval.hpp"
#include "hestonld/legendre.hpp"
#include "hestonld/montecarlo.hpp"
#include "hestonld/params.hpp"
#include "hestonld/rng.hpp"
