#pragma once

#include "smczoo/types.hpp"

namespace smczoo {

// Activation index map:
//   1 SELU   2 ReLU    3 Sigmoid  4 Sin      5 Hardlim
//   6 Tribas 7 Radbas  8 Sgn      9 Tansig
double activation(int index, double x);

/// Elementwise application; throws on index outside 1..9.
Matrix apply_activation(int index, const MatrixRef& X);

}  // namespace smczoo
