#pragma once

#include "gof/alternatives.hpp"
#include "gof/asymptotic.hpp"
#include "gof/critical.hpp"
#include "gof/distfn.hpp"
#include "gof/error.hpp"
#include "gof/exact.hpp"
#include "gof/hessenberg.hpp"
#include "gof/mc.hpp"
#include "gof/normal.hpp"
#include "gof/rng.hpp"
#include "gof/statistics.hpp"
