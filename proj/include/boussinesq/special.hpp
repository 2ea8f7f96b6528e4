#pragma once

#include "boussinesq/types.hpp"

namespace bsq {

// Principal log-gamma (branch cut on the negative real axis), evaluated in
// quad precision and rounded.
cplx log_gamma(cplx z);

// Scaled parabolic cylinder function e^{zeta^2/4} D_a(zeta).
// Valid for |arg zeta| < 3pi/4; the model problem only needs |arg zeta| <= pi/2.
cplx pcf_scaled(cplx a, cplx zeta);

}  // namespace bsq
