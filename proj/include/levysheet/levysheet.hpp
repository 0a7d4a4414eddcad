#pragma once

#include "core.hpp"
#include "exponent.hpp"
#include "path.hpp"
#include "fdd.hpp"
#include "gauss.hpp"
#include "jumpsim.hpp"
#include "stationary.hpp"
#include "verify.hpp"
#include "parallel.hpp"
#include "io.hpp"
#include "acceptance.hpp"
