#pragma once

#include "ergodic_lab/approximants.hpp"
#include "ergodic_lab/arithmetic.hpp"
#include "ergodic_lab/circle_method.hpp"
#include "ergodic_lab/core.hpp"
#include "ergodic_lab/csv.hpp"
#include "ergodic_lab/cyclic.hpp"
#include "ergodic_lab/ergodic.hpp"
#include "ergodic_lab/fft.hpp"
#include "ergodic_lab/gowers.hpp"
#include "ergodic_lab/padic.hpp"
#include "ergodic_lab/polynomial.hpp"
#include "ergodic_lab/signals.hpp"
#include "ergodic_lab/variation.hpp"
