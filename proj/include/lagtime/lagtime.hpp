#pragma once

#include "lagtime/errors.hpp"
#include "lagtime/specfun.hpp"
#include "lagtime/tridiagonal.hpp"
#include "lagtime/quadrature.hpp"
#include "lagtime/modes.hpp"
#include "lagtime/operators.hpp"
#include "lagtime/timerep.hpp"
#include "lagtime/arrival.hpp"
#include "lagtime/figures.hpp"
#include "lagtime/verify.hpp"
#include "lagtime/version.hpp"
