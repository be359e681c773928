#pragma once

#include "animat/config.hpp"
#include "animat/evo.hpp"
#include "animat/genome.hpp"
#include "animat/io.hpp"
#include "animat/netdyn.hpp"
#include "animat/network_types.hpp"
#include "animat/neurodev.hpp"
#include "animat/rng.hpp"
#include "animat/world.hpp"
