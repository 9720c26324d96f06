#pragma once

#include "padehankel/bigfloat.hpp"
#include "padehankel/scalar.hpp"
#include "padehankel/poly.hpp"
#include "padehankel/roots.hpp"
#include "padehankel/convolution.hpp"
#include "padehankel/problems.hpp"
#include "padehankel/series.hpp"
#include "padehankel/hankel.hpp"
#include "padehankel/solver.hpp"
#include "padehankel/oracle.hpp"
