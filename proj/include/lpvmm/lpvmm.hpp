#pragma once

#include "lpvmm/bench.hpp"
#include "lpvmm/errors.hpp"
#include "lpvmm/model.hpp"
#include "lpvmm/model_io.hpp"
#include "lpvmm/oracle.hpp"
#include "lpvmm/reduce.hpp"
#include "lpvmm/subspace.hpp"
