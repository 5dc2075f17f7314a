#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skelxai/attribution.hpp"

namespace skelxai {

// Mean and half-width of the normal-approximation 95% interval
// (1.96 * s / sqrt(n)); fewer than two values give a zero half-width.
struct MetricCell {
    double mean = 0.0;
    double halfwidth = 0.0;
    int count = 0;
};

MetricCell aggregate(std::span<const double> values);

// One row of the metric report: a (class, method, radius) cell with the
// seven metric aggregates and the bookkeeping counts.
struct ReportRow {
    int class_id = 0;
    Method method = Method::CAM;
    double radius_cm = 0.0;
    MetricCell pgi, pgu, ris_joint, ris_velocity, ris_bone, ros, rrs;
    int samples = 0;     // samples evaluated for this cell
    int excluded = 0;    // stability exclusions (no admissible draw)
    int degenerate = 0;  // degenerate attribution normalizations
};

struct MetricReport {
    std::vector<ReportRow> rows;
};

// Names of the seven metrics in report column order.
std::span<const char* const> metric_names();

// CSV with one row per (class, method, radius); each metric column holds
// "mean,halfwidth". Cells without data print "nan,nan".
std::string report_to_csv(const MetricReport& report);

// One plot-data point: a metric aggregated over every evaluated class at a
// given (radius, method).
struct PlotPoint {
    double radius_cm = 0.0;
    Method method = Method::CAM;
    MetricCell cell;
};

// CSV with columns radius_cm, method, mean, halfwidth.
std::string plot_series_csv(std::span<const PlotPoint> points);

// Human-readable table of a report (used by the report subcommand).
std::string format_report_table(const MetricReport& report);

}  // namespace skelxai
