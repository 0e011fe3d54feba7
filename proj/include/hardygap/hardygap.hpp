#pragma once
// Umbrella header: the full weighted Hardy-constant toolkit.

#include "hardygap/classifier.hpp"
#include "hardygap/commands.hpp"
#include "hardygap/config.hpp"
#include "hardygap/estimates.hpp"
#include "hardygap/indicial.hpp"
#include "hardygap/mesh.hpp"
#include "hardygap/params.hpp"
#include "hardygap/profile.hpp"
#include "hardygap/quadrature.hpp"
#include "hardygap/radial_ops.hpp"
#include "hardygap/rayleigh.hpp"
#include "hardygap/report.hpp"
#include "hardygap/svg.hpp"
#include "hardygap/verify.hpp"
#include "hardygap/version.hpp"
