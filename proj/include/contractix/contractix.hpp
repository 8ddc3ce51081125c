#pragma once

#include "contractix/error.hpp"
#include "contractix/point.hpp"
#include "contractix/maps.hpp"
#include "contractix/rng.hpp"
#include "contractix/lipschitz.hpp"
#include "contractix/schedules.hpp"
#include "contractix/certifier.hpp"
#include "contractix/json_io.hpp"
#include "contractix/experiment.hpp"
