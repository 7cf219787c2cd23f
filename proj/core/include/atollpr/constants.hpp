#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "atollpr/analytic.hpp"
#include "atollpr/atoll.hpp"
#include "atollpr/grid.hpp"

namespace atollpr {

enum class Provenance { closed_form, eigensolve, bound };
const char* provenance_name(Provenance p);

// Reference values on B_{tau,1}; produced by tools/calibrate_tables.
struct CalibrationTable {
  const char* version;
  std::span<const double> tau;
  std::span<const double> rho;       // trace constant, safety factor applied
  std::span<const double> poincare;  // Neumann Poincare constant
  double annulus_c;                  // C_poinc(B_{r,s}) <= annulus_c * s
  double safety;
};
const CalibrationTable& calibration();
// Largest tabulated tau.
inline constexpr double kMaxTau = 0.95;
// Max of the two bracketing table entries. tau > kMaxTau is an error.
double rho(double tau);

enum class PoincareMethod { closed_form, eigensolve };

struct PoincareOptions {
  int resolution = 160;  // cells per outer radius for disc/annulus eigensolves
  double tol = 1e-8;
  int max_iter = 10000;
};

double poincare_constant(const ParamDomain& domain, PoincareMethod method, const PoincareOptions& options = {});
// Raster eigensolve on the mask's own lattice.
double poincare_eigensolve(const DomainMask& mask, const PoincareOptions& options = {});

double analytic_poincare_bound(double C_poinc, double area, double dist_z0, double p);

struct Z0Selection {
  cd z0;
  std::size_t cell = 0;
  double C_samp = 0.0;
  double dist = 0.0;            // distance transform value at z0
  std::size_t candidates = 0;   // cells in D_C(t)
  bool fallback = false;        // D_C(t) was empty on the lattice
};

Z0Selection select_z0(const TFGrid& G, const DomainMask& mask, double t = 0.5, double p = 2.0);

double trace_constant(const ParamDomain& domain);
Provenance trace_provenance(const ParamDomain& domain);
double boundary_constant(const ParamDomain& domain, double p);
double var_eta(const Normalizer& eta, const ParamDomain& lagoon);

double hyperbolic_area(const Disc& disc);
// Polar midpoint rule with about `samples` nodes.
double hyperbolic_area_quadrature(const Disc& disc, std::size_t samples = 1000000);

struct StabilityCertificate {
  int component_id = -1;
  double p = 2.0;
  double t = 0.5;
  std::string normalizer;
  std::string shape;
  cd z0;
  double dist_z0 = 0.0;
  double C_samp = 0.0;
  double C_poinc_classical = 0.0;
  double C_poinc_analytic = 0.0;
  double C_trace = 0.0;
  std::vector<double> C_bound;
  std::vector<double> var_eta;
  std::vector<cd> lagoon_centres;
  std::vector<double> lagoon_radii;
  std::vector<double> lagoon_terms;
  double c_uniform = 1.0;
  double C_total = 0.0;
  double delta = 0.0;
  double Delta = 0.0;
  double bound_value = 0.0;
  std::map<std::string, Provenance> provenance;
  std::string calibration_version;
};

// c (Ca + Cs + sum_i Cb_i var_i Ct (Ca + Cs)) from the stored parts.
double certificate_total(const StabilityCertificate& cert);

struct CertificateOptions {
  PoincareMethod poincare = PoincareMethod::eigensolve;
  PoincareOptions eigen;
};

StabilityCertificate assemble_certificate(const AtollComponent& component, const Normalizer& eta, const TFGrid& G,
                                          double p = 2.0, double t = 0.5, double c_uniform = 1.0,
                                          const CertificateOptions& options = {});

}  // namespace atollpr
