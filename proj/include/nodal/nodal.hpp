#pragma once

#include "nodal/errors.hpp"
#include "nodal/random.hpp"
#include "nodal/parallel.hpp"
#include "nodal/quadrature.hpp"
#include "nodal/specfun.hpp"
#include "nodal/torus.hpp"
#include "nodal/sphere.hpp"
#include "nodal/eigenid.hpp"
#include "nodal/signsearch.hpp"
#include "nodal/generators.hpp"
#include "nodal/io.hpp"
#include "nodal/svg.hpp"
#include "nodal/app.hpp"
