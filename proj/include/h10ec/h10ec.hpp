#pragma once

// Umbrella header.

#include "arith.hpp"
#include "certify.hpp"
#include "curve.hpp"
#include "curvedb.hpp"
#include "gl2.hpp"
#include "modpoly.hpp"
#include "selmer.hpp"
#include "sieve.hpp"
