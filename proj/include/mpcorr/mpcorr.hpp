#pragma once

#include "mpcorr/classify.hpp"
#include "mpcorr/common.hpp"
#include "mpcorr/decomposition.hpp"
#include "mpcorr/exchange.hpp"
#include "mpcorr/measures.hpp"
#include "mpcorr/qstate.hpp"
#include "mpcorr/states.hpp"
#include "mpcorr/su_basis.hpp"
