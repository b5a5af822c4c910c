#pragma once

#include "padicprep/error.hpp"
#include "padicprep/monomial.hpp"
#include "padicprep/coeff.hpp"
#include "padicprep/polynomial.hpp"
#include "padicprep/series.hpp"
#include "padicprep/weierstrass.hpp"
#include "padicprep/groebner.hpp"
#include "padicprep/ideal.hpp"
#include "padicprep/frobenius.hpp"
#include "padicprep/characters.hpp"
#include "padicprep/linearize.hpp"
#include "padicprep/homology.hpp"
#include "padicprep/io.hpp"
#include "padicprep/pipeline.hpp"
#include "padicprep/sampling.hpp"
#include "padicprep/selftest.hpp"
