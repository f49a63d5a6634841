#pragma once

#include "core.hpp"
#include "decomposition.hpp"
#include "depposet.hpp"
#include "derivation.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "oracle.hpp"
