#pragma once
// Umbrella header for the ncvx library.

#include "ncvx/correlation.hpp"
#include "ncvx/csv.hpp"
#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/expression.hpp"
#include "ncvx/factorization.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/model.hpp"
#include "ncvx/model_io.hpp"
#include "ncvx/reliability.hpp"
#include "ncvx/sampling.hpp"
#include "ncvx/svg.hpp"
#include "ncvx/variant.hpp"
