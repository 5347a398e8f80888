#pragma once

#include "sqperm/construct.hpp"
#include "sqperm/crucial.hpp"
#include "sqperm/enumerate.hpp"
#include "sqperm/errors.hpp"
#include "sqperm/permutation.hpp"
#include "sqperm/search.hpp"
#include "sqperm/squares.hpp"
