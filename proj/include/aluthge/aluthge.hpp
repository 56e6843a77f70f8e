#pragma once

#include "aluthge/catalog.hpp"
#include "aluthge/ensembles.hpp"
#include "aluthge/functions.hpp"
#include "aluthge/harness.hpp"
#include "aluthge/json_io.hpp"
#include "aluthge/matrix.hpp"
#include "aluthge/polar.hpp"
#include "aluthge/radii.hpp"
#include "aluthge/report.hpp"
#include "aluthge/spectral.hpp"
#include "aluthge/transforms.hpp"
