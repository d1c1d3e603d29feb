#pragma once

#include "risvlc/bench.hpp"
#include "risvlc/diffraction.hpp"
#include "risvlc/error.hpp"
#include "risvlc/optics.hpp"
#include "risvlc/radiometry.hpp"
#include "risvlc/scenario.hpp"
#include "risvlc/tuning.hpp"
#include "risvlc/units.hpp"
