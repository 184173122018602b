#pragma once

#include "vosa/scalar.hpp"
#include "vosa/linalg.hpp"
#include "vosa/fock.hpp"
#include "vosa/field.hpp"
#include "vosa/verify.hpp"
#include "vosa/zhu.hpp"
#include "vosa/modules.hpp"
#include "vosa/lie.hpp"
#include "vosa/induce.hpp"
#include "vosa/cache.hpp"
#include "vosa/suites.hpp"
