#pragma once

#include "solitonlab/errors.hpp"
#include "solitonlab/jets.hpp"
#include "solitonlab/expr.hpp"
#include "solitonlab/tensor.hpp"
#include "solitonlab/geometry.hpp"
#include "solitonlab/speclin.hpp"
#include "solitonlab/quadrature.hpp"
#include "solitonlab/catalog.hpp"
#include "solitonlab/verify.hpp"
#include "solitonlab/walker3.hpp"
#include "solitonlab/report.hpp"
#include "solitonlab/cli.hpp"
