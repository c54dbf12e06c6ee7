#pragma once

#include "wallis/approximants.hpp"
#include "wallis/certifier.hpp"
#include "wallis/decimal.hpp"
#include "wallis/errors.hpp"
#include "wallis/interval.hpp"
#include "wallis/precision.hpp"
#include "wallis/rational.hpp"
#include "wallis/series.hpp"
