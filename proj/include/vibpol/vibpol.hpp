#pragma once

// Umbrella header for the coupled cavity-matter chain library.

#include "units.hpp"
#include "errors.hpp"
#include "smallmat.hpp"
#include "params.hpp"
#include "stencil.hpp"
#include "kgrid.hpp"
#include "model.hpp"
#include "gf.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "fft.hpp"
#include "md.hpp"
#include "correlation.hpp"
#include "scp.hpp"
#include "savgol.hpp"
#include "bath.hpp"
#include "vdmft.hpp"
#include "spectra.hpp"
#include "config.hpp"
#include "csvio.hpp"
