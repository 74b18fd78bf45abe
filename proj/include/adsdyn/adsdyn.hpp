#pragma once
#include "errors.hpp"
#include "specfun.hpp"
#include "profiles.hpp"
#include "radial6.hpp"
#include "fields.hpp"
#include "atlas.hpp"
#include "spectrum.hpp"
#include "energy.hpp"
#include "evolve.hpp"
#include "synth.hpp"
#include "config.hpp"
