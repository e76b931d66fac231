#ifndef DECOH_DECOH_HPP
#define DECOH_DECOH_HPP

// Convenience umbrella: the full bath-decoherence toolkit.

#include "decoh/errors.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/tabulated.hpp"
#include "decoh/spectral.hpp"
#include "decoh/correlator.hpp"
#include "decoh/pointer.hpp"
#include "decoh/decoherence.hpp"
#include "decoh/regimes.hpp"
#include "decoh/measurement.hpp"
#include "decoh/oracle.hpp"
#include "decoh/csvio.hpp"
#include "decoh/parallel.hpp"
#include "decoh/config.hpp"

#endif
