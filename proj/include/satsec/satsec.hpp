#pragma once

#include "satsec/codec.hpp"
#include "satsec/errors.hpp"
#include "satsec/exponents.hpp"
#include "satsec/geometry.hpp"
#include "satsec/gf2.hpp"
#include "satsec/infotheory.hpp"
#include "satsec/linkdesign.hpp"
#include "satsec/optimize.hpp"
#include "satsec/quadrature.hpp"
#include "satsec/scenario_io.hpp"
#include "satsec/units.hpp"
