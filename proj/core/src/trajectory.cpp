#include "repopt/trajectory.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace repopt {

double step_budget(const Trajectory& trajectory) {
  double sum = 0.0;
  for (const auto& rec : trajectory.records) sum += rec.t_ex * rec.t_ex;
  return sum;
}

double step_budget_bound(const Trajectory& trajectory, double gamma) {
  if (trajectory.records.empty()) throw std::invalid_argument("step_budget_bound: empty trajectory");
  return (2.0 / gamma) * (trajectory.records.front().h_x - trajectory.final_h);
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& os) {
  os << "k,h_x,h_z,rep_accepted,t_ex,residual\n";
  for (const auto& rec : trajectory.records) {
    os << rec.k << ',' << fmt17(rec.h_x) << ',' << fmt17(rec.h_z) << ','
       << (rec.rep_accepted ? 1 : 0) << ',' << fmt17(rec.t_ex) << ','
       << fmt17(rec.residual) << '\n';
  }
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream os;
  write_trajectory_csv(trajectory, os);
  return os.str();
}

}  // namespace repopt
