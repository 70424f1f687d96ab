#include "smczoo/metrics.hpp"

#include <stdexcept>

namespace smczoo {

ConfusionMatrix confusion(const VectorRef& y_true, const VectorRef& y_pred) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("confusion: length mismatch");
    ConfusionMatrix cm;
    for (Eigen::Index i = 0; i < y_true.size(); ++i) {
        const double t = y_true(i), p = y_pred(i);
        if ((t != 1.0 && t != -1.0) || (p != 1.0 && p != -1.0))
            throw std::invalid_argument("confusion: labels must be +1/-1");
        if (t > 0)
            (p > 0 ? cm.tp : cm.fn)++;
        else
            (p > 0 ? cm.fp : cm.tn)++;
    }
    return cm;
}

double f_measure(double precision, double sensitivity) {
    if (precision + sensitivity <= 0.0) return 0.0;
    return 2.0 * precision * sensitivity / (precision + sensitivity);
}

MetricReport metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("metrics: empty confusion matrix");
    MetricReport r;
    r.cm = cm;
    auto ratio = [&r](long num, long den) {
        if (den == 0) {
            r.degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.acc = ratio(cm.tp + cm.tn, cm.total());
    r.sens = ratio(cm.tp, cm.tp + cm.fn);
    r.spec = ratio(cm.tn, cm.tn + cm.fp);
    r.prec = ratio(cm.tp, cm.tp + cm.fp);
    if (r.prec + r.sens <= 0.0) r.degenerate = true;
    r.fmeasure = f_measure(r.prec, r.sens);
    return r;
}

}  // namespace smczoo
