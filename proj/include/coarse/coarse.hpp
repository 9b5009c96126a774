#pragma once

// Umbrella header.
#include "chain.hpp"
#include "coarse_map.hpp"
#include "cochain.hpp"
#include "dynamics.hpp"
#include "dynamics_gallery.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "fin_sup_fun.hpp"
#include "finite_index.hpp"
#include "finite_system.hpp"
#include "group.hpp"
#include "groupoid.hpp"
#include "homology.hpp"
#include "limits.hpp"
#include "map_gallery.hpp"
#include "matrix.hpp"
#include "random.hpp"
#include "res_modules.hpp"
#include "ring.hpp"
#include "subset.hpp"
