#pragma once

#include "rational.hpp"
#include "poly.hpp"
#include "weyl.hpp"
#include "annihilators.hpp"
#include "charvar.hpp"
#include "json_io.hpp"
#include "membership.hpp"
#include "numerics.hpp"
#include "report.hpp"
#include "suites.hpp"
#include "symfun.hpp"
#include "transport.hpp"
