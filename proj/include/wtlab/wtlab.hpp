#pragma once

#include "wtlab/config.hpp"
#include "wtlab/convex_polynomial.hpp"
#include "wtlab/criteria.hpp"
#include "wtlab/hull.hpp"
#include "wtlab/lattice.hpp"
#include "wtlab/probes.hpp"
#include "wtlab/report.hpp"
#include "wtlab/sparse_spec.hpp"
#include "wtlab/transitivity.hpp"
#include "wtlab/weight.hpp"
#include "wtlab/weighted_translation.hpp"
