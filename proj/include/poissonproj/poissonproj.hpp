#ifndef POISSONPROJ_POISSONPROJ_HPP
#define POISSONPROJ_POISSONPROJ_HPP

#include "poissonproj/basis.hpp"
#include "poissonproj/bench.hpp"
#include "poissonproj/estimator.hpp"
#include "poissonproj/intensity.hpp"
#include "poissonproj/io.hpp"
#include "poissonproj/quadrature.hpp"
#include "poissonproj/rng.hpp"
#include "poissonproj/sampler.hpp"
#include "poissonproj/selection.hpp"

#endif  // POISSONPROJ_POISSONPROJ_HPP
