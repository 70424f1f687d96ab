#include "smczoo/activations.hpp"

#include <cmath>
#include <stdexcept>

namespace smczoo {

namespace {
constexpr double kSeluAlpha = 1.6733;
constexpr double kSeluLambda = 1.0507;
}  // namespace

double activation(int index, double x) {
    switch (index) {
        case 1: return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
        case 2: return x > 0.0 ? x : 0.0;
        case 3: return 1.0 / (1.0 + std::exp(-x));
        case 4: return std::sin(x);
        case 5: return x >= 0.0 ? 1.0 : 0.0;
        case 6: return std::max(0.0, 1.0 - std::abs(x));
        case 7: return std::exp(-x * x);
        case 8: return x >= 0.0 ? 1.0 : -1.0;
        case 9: return std::tanh(x);
        default: throw std::invalid_argument("activation: index must be in 1..9");
    }
}

Matrix apply_activation(int index, const MatrixRef& X) {
    if (index < 1 || index > 9)
        throw std::invalid_argument("activation: index must be in 1..9");
    return X.unaryExpr([index](double v) { return activation(index, v); });
}

}  // namespace smczoo
