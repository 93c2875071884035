#pragma once

#include "robinrad/error.hpp"
#include "robinrad/domain.hpp"
#include "robinrad/tridiag.hpp"
#include "robinrad/discretization.hpp"
#include "robinrad/specfun.hpp"
#include "robinrad/spectral.hpp"
#include "robinrad/ode.hpp"
#include "robinrad/bvp.hpp"
#include "robinrad/io.hpp"
#include "robinrad/validation.hpp"
