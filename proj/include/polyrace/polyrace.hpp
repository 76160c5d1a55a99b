#pragma once

#include "aberth.hpp"
#include "bench.hpp"
#include "counted.hpp"
#include "families.hpp"
#include "match.hpp"
#include "newton.hpp"
#include "polynomial.hpp"
