#pragma once

// Everything at once: special functions, spectrum, factorization, expansion, fields, oracle.
#include "stokes/errors.hpp"
#include "stokes/expansion.hpp"
#include "stokes/fields.hpp"
#include "stokes/model.hpp"
#include "stokes/oracle.hpp"
#include "stokes/quadrature.hpp"
#include "stokes/riemann.hpp"
#include "stokes/special_functions.hpp"
#include "stokes/spectral.hpp"
#include "stokes/validation.hpp"
