#pragma once

#include "rotsol/analysis.hpp"
#include "rotsol/errors.hpp"
#include "rotsol/evolver.hpp"
#include "rotsol/gallery.hpp"
#include "rotsol/integrator.hpp"
#include "rotsol/interp.hpp"
#include "rotsol/manifest.hpp"
#include "rotsol/profile_io.hpp"
#include "rotsol/reparam.hpp"
#include "rotsol/run.hpp"
#include "rotsol/soliton.hpp"
#include "rotsol/surface.hpp"
