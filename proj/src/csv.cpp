#include "ltlab/csv.hpp"

#include <cstdio>

namespace ltlab::csv {

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_path(std::ostream& out, const SamplePath& path) {
    out << (path.has_driver() ? "t,value,dW\n" : "t,value\n");
    for (std::size_t i = 0; i < path.grid().points(); ++i) {
        out << format(path.grid().time(i)) << ',' << format(path.value(i));
        if (path.has_driver()) {
            out << ',';
            if (i < path.steps())
                out << format(path.driver_increments()[static_cast<Eigen::Index>(i)]);
        }
        out << '\n';
    }
}

void write_histogram(std::ostream& out, const Eigen::ArrayXd& edges,
                     const Eigen::ArrayXd& mass) {
    out << "bin_left,bin_right,mass\n";
    for (Eigen::Index b = 0; b + 1 < edges.size(); ++b)
        out << format(edges[b]) << ',' << format(edges[b + 1]) << ',' << format(mass[b]) << '\n';
}

void write_field(std::ostream& out, const localtime::LocalTimeField& field) {
    out << "t,x,L\n";
    for (std::size_t i = 0; i < field.t_grid.points(); ++i)
        for (Eigen::Index j = 0; j < field.x_grid.size(); ++j)
            out << format(field.t_grid.time(i)) << ',' << format(field.x_grid[j]) << ','
                << format(field.values(static_cast<Eigen::Index>(i), j)) << '\n';
}

void write_ensemble_summary(std::ostream& out, const Eigen::ArrayXd& levels,
                            const Eigen::ArrayXd& means, const Eigen::ArrayXd& stderrs,
                            std::size_t n) {
    out << "x,mean_L,stderr,n\n";
    for (Eigen::Index j = 0; j < levels.size(); ++j)
        out << format(levels[j]) << ',' << format(means[j]) << ',' << format(stderrs[j]) << ','
            << n << '\n';
}

void write_reflected(std::ostream& out, const reflection::ReflectedPair& pair) {
    out << "t,x,z,f\n";
    for (std::size_t i = 0; i < pair.x.grid().points(); ++i)
        out << format(pair.x.grid().time(i)) << ',' << format(pair.x.value(i)) << ','
            << format(pair.z.value(i)) << ',' << format(pair.f.value(i)) << '\n';
}

void write_time_change(std::ostream& out, const timechange::TimeChangeMap& map) {
    out << "t,C_t\n";
    const TimeGrid grid = map.sample_grid();
    const Eigen::ArrayXd forward = map.forward_samples();
    for (std::size_t j = 0; j < grid.points(); ++j)
        out << format(j == grid.steps() ? map.max_attained() : grid.time(j)) << ','
            << format(forward[static_cast<Eigen::Index>(j)]) << '\n';
}

void append_report_rows(std::ostream& out, const verify::CheckReport& report) {
    for (const auto& l : report.lines)
        out << report.check << '.' << l.name << ',' << format(l.statistic) << ','
            << format(l.threshold) << ',' << (l.pass ? "1" : "0") << ',' << l.n << ',' << l.seed
            << '\n';
}

void write_report(std::ostream& out, const verify::CheckReport& report) {
    out << "check,statistic,threshold,pass,n,seed\n";
    append_report_rows(out, report);
}

}  // namespace ltlab::csv
