#pragma once

#include <string>
#include <vector>

#include "coughdet/manifest.hpp"

namespace coughdet {

/// Counts with cough as the positive class.
struct ConfusionMatrix {
    long tp = 0, fn = 0, fp = 0, tn = 0;
    long total() const { return tp + fn + fp + tn; }
};

/// One comparison-table row. Percentages in [0,100]; a NaN marks an
/// undefined ratio (zero denominator), never silently 0.
struct MetricsRow {
    std::string method;
    int k = 0;
    double accuracy = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    bool failed = false;
    std::string error;
};

ConfusionMatrix confusion(const std::vector<Label>& pred, const std::vector<Label>& truth);

MetricsRow compute_metrics(const ConfusionMatrix& cm);

struct Report {
    std::string text;
    std::string csv;  // header: method,k,accuracy,recall,precision,f1
    std::size_t best_row = 0;
};

/// Groups rows by method and orders by k; flags the best row
/// (max accuracy, then max F1, then min k).
Report render_report(const std::vector<MetricsRow>& rows);

}  // namespace coughdet
