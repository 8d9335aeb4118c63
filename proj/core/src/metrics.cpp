#include "coughdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "coughdet/errors.hpp"

namespace coughdet {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt2(double v) {
    if (std::isnan(v)) return "n/a";
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << v;
    return out.str();
}

std::string fmt_full(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}
}  // namespace

ConfusionMatrix confusion(const std::vector<Label>& pred, const std::vector<Label>& truth) {
    if (pred.size() != truth.size())
        throw LengthMismatch(std::to_string(pred.size()) + " vs " + std::to_string(truth.size()));
    if (pred.empty()) throw EmptyInput("no labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] == Label::cough)
            (pred[i] == Label::cough ? cm.tp : cm.fn)++;
        else
            (pred[i] == Label::cough ? cm.fp : cm.tn)++;
    }
    return cm;
}

MetricsRow compute_metrics(const ConfusionMatrix& cm) {
    if (cm.total() < 1) throw EmptyInput("empty confusion matrix");
    MetricsRow row;
    row.accuracy = 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    row.recall = (cm.tp + cm.fn) > 0
                     ? 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn)
                     : kNaN;
    row.precision = (cm.tp + cm.fp) > 0
                        ? 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp)
                        : kNaN;
    if (std::isnan(row.recall) || std::isnan(row.precision) || row.precision + row.recall == 0)
        row.f1 = kNaN;
    else
        row.f1 = 2.0 * (row.precision / 100.0) * (row.recall / 100.0) /
                 (row.precision / 100.0 + row.recall / 100.0);
    return row;
}

Report render_report(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) throw EmptyInput("no rows to report");

    // Group by method in first-appearance order, then sort each group by k.
    std::vector<std::string> method_order;
    std::map<std::string, std::vector<MetricsRow>> groups;
    for (const auto& r : rows) {
        if (groups.find(r.method) == groups.end()) method_order.push_back(r.method);
        groups[r.method].push_back(r);
    }
    std::vector<MetricsRow> ordered;
    for (const auto& m : method_order) {
        auto& g = groups[m];
        std::stable_sort(g.begin(), g.end(),
                         [](const MetricsRow& a, const MetricsRow& b) { return a.k < b.k; });
        ordered.insert(ordered.end(), g.begin(), g.end());
    }

    std::size_t best = 0;
    bool have_best = false;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& r = ordered[i];
        if (r.failed || std::isnan(r.accuracy)) continue;
        if (!have_best) { best = i; have_best = true; continue; }
        const auto& cur = ordered[best];
        const double rf1 = std::isnan(r.f1) ? -1.0 : r.f1;
        const double cf1 = std::isnan(cur.f1) ? -1.0 : cur.f1;
        if (r.accuracy > cur.accuracy ||
            (r.accuracy == cur.accuracy && (rf1 > cf1 || (rf1 == cf1 && r.k < cur.k))))
            best = i;
    }

    Report report;
    report.best_row = best;
    std::ostringstream text, csv;
    text << std::left << std::setw(24) << "Feature selection method" << std::setw(16)
         << "Feature number" << std::setw(14) << "Accuracy (%)" << std::setw(12) << "Recall (%)"
         << std::setw(15) << "Precision (%)" << std::setw(10) << "F1-Score"
         << "\n";
    text << std::string(91, '-') << "\n";
    csv << "method,k,accuracy,recall,precision,f1\n";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& r = ordered[i];
        if (r.failed) {
            text << std::left << std::setw(24) << r.method << std::setw(16) << r.k
                 << "FAILED: " << r.error << "\n";
            csv << r.method << ',' << r.k << ",,,,\n";
            continue;
        }
        text << std::left << std::setw(24) << r.method << std::setw(16) << r.k << std::setw(14)
             << fmt2(r.accuracy) << std::setw(12) << fmt2(r.recall) << std::setw(15)
             << fmt2(r.precision) << std::setw(10) << fmt2(r.f1)
             << (have_best && i == best ? "  <- best" : "") << "\n";
        csv << r.method << ',' << r.k << ',' << fmt_full(r.accuracy) << ',' << fmt_full(r.recall)
            << ',' << fmt_full(r.precision) << ',' << fmt_full(r.f1) << '\n';
    }
    report.text = text.str();
    report.csv = csv.str();
    return report;
}

}  // namespace coughdet
