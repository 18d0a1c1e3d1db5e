#pragma once

#include "lwtsim/address.hpp"
#include "lwtsim/align.hpp"
#include "lwtsim/buffer.hpp"
#include "lwtsim/errors.hpp"
#include "lwtsim/headers.hpp"
#include "lwtsim/perf.hpp"
#include "lwtsim/pipeline.hpp"
#include "lwtsim/profiles.hpp"
#include "lwtsim/triggers.hpp"
#include "lwtsim/wire.hpp"
