#pragma once

// Exact core: rationals, polynomials, decomposition, compilers, certifier, I/O.
// The approximation lab lives in reluk/approx/ and additionally needs Eigen
// and Boost.Math.

#include "reluk/certifier.hpp"
#include "reluk/deep_compile.hpp"
#include "reluk/error.hpp"
#include "reluk/io.hpp"
#include "reluk/linear_algebra.hpp"
#include "reluk/monomial_decomp.hpp"
#include "reluk/network.hpp"
#include "reluk/polynomial.hpp"
#include "reluk/random.hpp"
#include "reluk/rational.hpp"
#include "reluk/shallow_compile.hpp"
#include "reluk/shallow_embed.hpp"
#include "reluk/vandermonde.hpp"
