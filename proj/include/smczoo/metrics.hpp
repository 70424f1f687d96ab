#pragma once

#include "smczoo/types.hpp"

namespace smczoo {

struct ConfusionMatrix {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    long total() const { return tp + tn + fp + fn; }
};

struct MetricReport {
    double acc = 0.0;
    double sens = 0.0;
    double spec = 0.0;
    double prec = 0.0;
    double fmeasure = 0.0;
    ConfusionMatrix cm;
    bool degenerate = false;  // some ratio had a zero denominator
};

/// Counts with +1 as the positive class. Throws on length mismatch or a
/// label outside {+1, -1}.
ConfusionMatrix confusion(const VectorRef& y_true, const VectorRef& y_pred);

/// Accuracy, sensitivity, specificity, precision and F-measure from the
/// counts; undefined ratios are reported as 0 with the degenerate flag.
MetricReport metrics(const ConfusionMatrix& cm);

double f_measure(double precision, double sensitivity);

}  // namespace smczoo
