#pragma once

#include "twoone/constructions.hpp"
#include "twoone/core.hpp"
#include "twoone/dot.hpp"
#include "twoone/error.hpp"
#include "twoone/families.hpp"
#include "twoone/io.hpp"
#include "twoone/isobuilder.hpp"
#include "twoone/registry.hpp"
#include "twoone/structure.hpp"
#include "twoone/treeiso.hpp"
