#pragma once
// Umbrella header.

#include "weil/algebra.hpp"
#include "weil/apoint.hpp"
#include "weil/construct.hpp"
#include "weil/expr.hpp"
#include "weil/ideal.hpp"
#include "weil/io.hpp"
#include "weil/linalg.hpp"
#include "weil/morphism.hpp"
#include "weil/polarization.hpp"
#include "weil/rational.hpp"
#include "weil/truncated.hpp"
