#include "skelxai/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace skelxai {

namespace {

constexpr const char* kMetricNames[] = {"pgi",      "pgu", "ris_joint", "ris_velocity",
                                        "ris_bone", "ros", "rrs"};

std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

std::string format_cell(const MetricCell& cell) {
    if (cell.count == 0) return "\"nan,nan\"";
    return "\"" + format_value(cell.mean) + "," + format_value(cell.halfwidth) + "\"";
}

}  // namespace

MetricCell aggregate(std::span<const double> values) {
    MetricCell cell;
    cell.count = static_cast<int>(values.size());
    if (values.empty()) return cell;
    double sum = 0.0;
    for (double x : values) sum += x;
    cell.mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double x : values) ss += (x - cell.mean) * (x - cell.mean);
        const double stddev = std::sqrt(ss / (values.size() - 1));
        cell.halfwidth = 1.96 * stddev / std::sqrt(static_cast<double>(values.size()));
    }
    return cell;
}

std::span<const char* const> metric_names() { return kMetricNames; }

std::string report_to_csv(const MetricReport& report) {
    std::string out =
        "class,method,r_cm,PGI,PGU,RISj,RISv,RISb,ROS,RRS,samples,excluded,degenerate\n";
    for (const ReportRow& row : report.rows) {
        out += std::to_string(row.class_id);
        out += ',';
        out += method_name(row.method);
        out += ',';
        out += format_value(row.radius_cm);
        for (const MetricCell* cell : {&row.pgi, &row.pgu, &row.ris_joint, &row.ris_velocity,
                                       &row.ris_bone, &row.ros, &row.rrs}) {
            out += ',';
            out += format_cell(*cell);
        }
        out += ',' + std::to_string(row.samples);
        out += ',' + std::to_string(row.excluded);
        out += ',' + std::to_string(row.degenerate);
        out += '\n';
    }
    return out;
}

std::string plot_series_csv(std::span<const PlotPoint> points) {
    std::string out = "radius_cm,method,mean,halfwidth\n";
    for (const PlotPoint& p : points) {
        out += format_value(p.radius_cm);
        out += ',';
        out += method_name(p.method);
        out += ',';
        out += p.cell.count == 0 ? "nan" : format_value(p.cell.mean);
        out += ',';
        out += p.cell.count == 0 ? "nan" : format_value(p.cell.halfwidth);
        out += '\n';
    }
    return out;
}

std::string format_report_table(const MetricReport& report) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof(line), "%-6s %-8s %-7s %-22s %-22s %-22s %-22s %-22s %-26s %-22s %s\n",
                  "class", "method", "r_cm", "PGI", "PGU", "RISj", "RISv", "RISb", "ROS",
                  "RRS", "n/excl/deg");
    out += line;
    auto cell_text = [](const MetricCell& c) -> std::string {
        if (c.count == 0) return "n/a";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4g \xc2\xb1 %.4g", c.mean, c.halfwidth);
        return buf;
    };
    for (const ReportRow& row : report.rows) {
        std::snprintf(line, sizeof(line),
                      "%-6d %-8s %-7.3g %-22s %-22s %-22s %-22s %-22s %-26s %-22s %d/%d/%d\n",
                      row.class_id, method_name(row.method), row.radius_cm,
                      cell_text(row.pgi).c_str(), cell_text(row.pgu).c_str(),
                      cell_text(row.ris_joint).c_str(), cell_text(row.ris_velocity).c_str(),
                      cell_text(row.ris_bone).c_str(), cell_text(row.ros).c_str(),
                      cell_text(row.rrs).c_str(), row.samples, row.excluded, row.degenerate);
        out += line;
    }
    return out;
}

}  // namespace skelxai
