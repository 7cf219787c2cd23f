// Regenerates core/src/calibration_table.cpp from reference eigenproblems on
// the annuli B_{tau,1}. Usage: calibrate_tables <output.cpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "atollpr/constants.hpp"
#include "atollpr/eigen_solvers.hpp"
#include "atollpr/error.hpp"

using namespace atollpr;

namespace {

constexpr const char* kVersion = "cal-1";
constexpr double kSafety = 1.02;

DomainMask reference(double tau) {
  const double h = std::min(0.01, (1.0 - tau) / 20.0);
  const int half = static_cast<int>(std::ceil(1.0 / h)) + 2;
  Lattice lat;
  lat.dx = lat.dy = h;
  lat.nx = lat.ny = 2 * half + 1;
  lat.origin_x = lat.origin_y = -half * h;
  if (tau == 0.0) return rasterize(Disc{cd{}, 1.0}, lat);
  return rasterize(Annulus{cd{}, tau, 1.0}, lat);
}

std::string list(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: calibrate_tables <output.cpp>\n";
    return 2;
  }
  try {
    std::vector<double> tau, rho_v, poinc;
    for (int k = 0; k <= 19; ++k) tau.push_back(0.05 * k);
    for (double t : tau) {
      const DomainMask m = reference(t);
      // C_trace(B_{t,1}) <= rho(t) (1 + 1).
      const double trace = std::sqrt(trace_rayleigh_max(m).value);
      const double cp = poincare_eigensolve(m);
      rho_v.push_back(kSafety * trace / 2.0);
      poinc.push_back(cp);
      std::fprintf(stderr, "tau=%.2f cells=%zu trace=%.6f poincare=%.6f\n", t, m.count(), trace, cp);
    }
    const double c = std::max(*std::max_element(poinc.begin(), poinc.end()), 1.0) * kSafety;
    std::ofstream os(argv[1]);
    os << "// Generated by tools/calibrate_tables. Do not edit.\n"
       << "#include \"atollpr/constants.hpp\"\n\n"
       << "namespace atollpr {\n\n"
       << "namespace {\n"
       << "constexpr double kTau[] = {" << list(tau) << "};\n"
       << "constexpr double kRho[] = {" << list(rho_v) << "};\n"
       << "constexpr double kPoincare[] = {" << list(poinc) << "};\n"
       << "}  // namespace\n\n"
       << "const CalibrationTable& calibration() {\n"
       << "  static const CalibrationTable table{\"" << kVersion << "\", kTau, kRho, kPoincare, " << std::setprecision(17)
       << c << ", " << kSafety << "};\n"
       << "  return table;\n"
       << "}\n\n"
       << "}  // namespace atollpr\n";
    if (!os) throw Error(ErrorKind::io, "cannot write output");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
