#pragma once

#include "kforge/builders.hpp"
#include "kforge/dgla.hpp"
#include "kforge/equivariance.hpp"
#include "kforge/errors.hpp"
#include "kforge/hodge.hpp"
#include "kforge/io.hpp"
#include "kforge/kuranishi.hpp"
#include "kforge/matrix.hpp"
#include "kforge/scalar.hpp"
#include "kforge/series.hpp"
