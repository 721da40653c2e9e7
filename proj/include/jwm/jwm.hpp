#pragma once

#include <jwm/numeric.hpp>
#include <jwm/symrep.hpp>
#include <jwm/lattice.hpp>
#include <jwm/qforms.hpp>
#include <jwm/theta.hpp>
#include <jwm/weierstrass.hpp>
#include <jwm/eichler.hpp>
#include <jwm/mockform.hpp>
#include <jwm/json_io.hpp>
