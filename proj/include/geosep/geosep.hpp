#ifndef GEOSEP_GEOSEP_HPP
#define GEOSEP_GEOSEP_HPP

// Everything in one include.
#include "ball_separator.hpp"
#include "constants.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "graph.hpp"
#include "instance.hpp"
#include "rng.hpp"
#include "separator.hpp"
#include "spatial.hpp"
#include "sphere_separator.hpp"
#include "verify.hpp"

#endif // GEOSEP_GEOSEP_HPP
