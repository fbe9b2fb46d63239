#pragma once

#include "hmf/arith.hpp"
#include "hmf/cache.hpp"
#include "hmf/certcheck.hpp"
#include "hmf/coeff.hpp"
#include "hmf/forms.hpp"
#include "hmf/hecke.hpp"
#include "hmf/linalg.hpp"
#include "hmf/numeric.hpp"
#include "hmf/quadfield.hpp"
#include "hmf/search.hpp"
#include "hmf/specialvalues.hpp"
