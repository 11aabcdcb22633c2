#pragma once

#include <ostream>
#include <string>

#include "ltlab/grid.hpp"
#include "ltlab/localtime.hpp"
#include "ltlab/reflection.hpp"
#include "ltlab/timechange.hpp"
#include "ltlab/verify.hpp"

namespace ltlab::csv {

// Decimal text with 17 significant digits (round-trips doubles).
std::string format(double v);

// header t,value[,dW]
void write_path(std::ostream& out, const SamplePath& path);

// header bin_left,bin_right,mass
void write_histogram(std::ostream& out, const Eigen::ArrayXd& edges,
                     const Eigen::ArrayXd& mass);

// header t,x,L  (rows in t-major order)
void write_field(std::ostream& out, const localtime::LocalTimeField& field);

// header x,mean_L,stderr,n
void write_ensemble_summary(std::ostream& out, const Eigen::ArrayXd& levels,
                            const Eigen::ArrayXd& means, const Eigen::ArrayXd& stderrs,
                            std::size_t n);

// header t,x,z,f
void write_reflected(std::ostream& out, const reflection::ReflectedPair& pair);

// header t,C_t
void write_time_change(std::ostream& out, const timechange::TimeChangeMap& map);

// header check,statistic,threshold,pass,n,seed
void write_report(std::ostream& out, const verify::CheckReport& report);
void append_report_rows(std::ostream& out, const verify::CheckReport& report);

}  // namespace ltlab::csv
