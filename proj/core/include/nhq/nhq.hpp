#pragma once

#include "nhq/error.hpp"
#include "nhq/fitting.hpp"
#include "nhq/hamiltonians.hpp"
#include "nhq/io.hpp"
#include "nhq/matrix2.hpp"
#include "nhq/oracle.hpp"
#include "nhq/params.hpp"
#include "nhq/propagators.hpp"
#include "nhq/scenario.hpp"
#include "nhq/state.hpp"
#include "nhq/units.hpp"
