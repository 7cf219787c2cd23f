#include "atollpr/retrieval.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "atollpr/alignment.hpp"
#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

TimeAxis retrieval_time_axis(const Lattice& lattice) { return default_time_axis(lattice); }

namespace {

double weighted_norm(const std::vector<double>& v) {
  std::vector<double> sq(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sq[k] = v[k] * v[k];
  return std::sqrt(pairwise_sum(sq));
}

double magnitude_misfit(const std::vector<cd>& PF, const std::vector<double>& M) {
  std::vector<double> d(M.size());
  for (std::size_t k = 0; k < M.size(); ++k) d[k] = std::abs(PF[k]) - M[k];
  return weighted_norm(d);
}

}  // namespace

RetrievalResult retrieve(const TFGrid& magnitude, int iters, std::uint64_t seed, const std::optional<GroundTruth>& truth,
                         const RetrievalOptions& options) {
  const Lattice& lat = magnitude.lattice();
  if (lat.dx * lat.dy > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "lattice density dx*dy = " << lat.dx * lat.dy << " exceeds 1; retrieval needs an invertible frame";
    fail(ErrorKind::domain, os.str());
  }
  if (iters < 0) fail(ErrorKind::precondition, "iteration count must be non-negative");
  for (const cd& v : magnitude.values())
    if (v.imag() != 0.0 || v.real() < 0.0) fail(ErrorKind::precondition, "retrieve expects a non-negative real magnitude");

  const Lattice full = full_band_lattice(lat);
  const TimeAxis axis = retrieval_time_axis(lat);
  const GaborFrame frame(full, axis);
  std::vector<double> M(full.size(), 0.0);
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i) M[full.index(i, j)] = magnitude(i, j).real();
  const double mnorm = weighted_norm(M);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-M_PI, M_PI);
  std::vector<cd> F(full.size());
  for (std::size_t k = 0; k < F.size(); ++k) F[k] = std::polar(M[k], phase(rng));

  RetrievalResult res{Signal(std::vector<cd>(axis.n), axis.sample_rate, axis.t0), TFGrid::zeros(lat), 0, false, 0.0, std::nullopt, std::nullopt, {}};
  std::vector<cd> f(axis.n), PF(full.size());
  if (mnorm == 0.0) {
    res.measurement_residual_rel = 0.0;
  } else {
    f = frame.pseudo_inverse(F);
    PF = frame.analysis(f);
    for (int it = 0; it < iters; ++it) {
      for (std::size_t k = 0; k < F.size(); ++k) F[k] = PF[k] == cd{} ? cd(M[k]) : M[k] * PF[k] / std::abs(PF[k]);
      f = frame.pseudo_inverse(F);
      PF = frame.analysis(f);
      res.residual_log.push_back(magnitude_misfit(PF, M) / mnorm);
      res.iterations = it + 1;
      const int w = options.stall_window;
      const std::size_t n = res.residual_log.size();
      if (w > 0 && n > static_cast<std::size_t>(w)) {
        const double old = res.residual_log[n - 1 - static_cast<std::size_t>(w)];
        if (old > 0.0 && (old - res.residual_log.back()) / old < options.stall_tol) {
          res.stalled = true;
          break;
        }
      }
    }
    if (iters == 0) res.residual_log.push_back(magnitude_misfit(PF, M) / mnorm);
    res.measurement_residual_rel = res.residual_log.back();
  }
  res.f_rec = Signal(f, axis.sample_rate, axis.t0);
  std::vector<cd> Fr(lat.size());
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i) Fr[lat.index(i, j)] = PF[full.index(i, j)];
  res.F_rec = TFGrid(lat, std::move(Fr));

  if (truth) {
    const Signal& ft = truth->f;
    if (ft.size() != axis.n || std::abs(ft.sample_rate() - axis.sample_rate) > 1e-12 * axis.sample_rate ||
        std::abs(ft.t0() - axis.t0) > 1e-9)
      fail(ErrorKind::structural, "ground-truth signal must live on retrieval_time_axis(lattice)");
    cd ip{};
    for (std::size_t k = 0; k < axis.n; ++k) ip += ft[k] * std::conj(res.f_rec[k]);
    const cd rot = ip == cd{} ? cd(1.0) : ip / std::abs(ip);
    std::vector<double> d(axis.n), n0(axis.n);
    for (std::size_t k = 0; k < axis.n; ++k) {
      d[k] = std::norm(ft[k] - rot * res.f_rec[k]);
      n0[k] = std::norm(ft[k]);
    }
    const double fn = std::sqrt(pairwise_sum(n0));
    res.time_residual_rel = fn > 0.0 ? std::sqrt(pairwise_sum(d)) / fn : 0.0;
    const TFGrid Ft = gabor_forward(ft, lat, GaborOptions{true});
    const double cut = options.phase_floor * Ft.max_abs();
    std::vector<double> ph(lat.size(), 0.0);
    for (std::size_t k = 0; k < ph.size(); ++k)
      if (std::abs(Ft[k]) >= cut && cut > 0.0 && res.F_rec[k] != cd{}) ph[k] = std::arg(Ft[k] / res.F_rec[k]);
    res.phase_map = TFGrid(lat, ph);
  }
  return res;
}

std::vector<PhaseDiagnosis> diagnose_phases(const TFGrid& F_true, const TFGrid& F_rec, const AtollDecomposition& dec,
                                            double floor) {
  require_same_lattice(F_true.lattice(), F_rec.lattice(), "diagnose_phases");
  require_same_lattice(F_true.lattice(), dec.lattice, "diagnose_phases decomposition");
  if (!(floor > 0.0)) fail(ErrorKind::precondition, "phase floor must be positive");
  const double cut = floor * F_true.max_abs();
  std::vector<PhaseDiagnosis> out(dec.size());
  for (std::size_t j = 0; j < dec.size(); ++j) {
    std::vector<double> c, s;
    for (std::size_t k = 0; k < F_true.size(); ++k) {
      if (dec.owner[k] != static_cast<int>(j) || std::abs(F_true[k]) < cut || F_rec[k] == cd{}) continue;
      const double a = std::arg(F_true[k] / F_rec[k]);
      c.push_back(std::cos(a));
      s.push_back(std::sin(a));
    }
    PhaseDiagnosis& d = out[j];
    d.cells = c.size();
    if (c.empty()) {
      d.degenerate = true;
      continue;
    }
    const double n = static_cast<double>(c.size());
    const double C = pairwise_sum(c) / n, S = pairwise_sum(s) / n;
    const double R = std::min(1.0, std::hypot(C, S));
    d.mean_phase = wrap_phase(std::atan2(S, C));
    d.circular_std = R > 0.0 ? std::sqrt(std::max(0.0, -2.0 * std::log(R))) : INFINITY;
  }
  return out;
}

}  // namespace atollpr
