#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atollpr/atoll.hpp"
#include "atollpr/transforms.hpp"

namespace atollpr {

struct RetrievalOptions {
  double stall_tol = 1e-9;  // relative residual change over the window
  int stall_window = 20;
  double phase_floor = 1e-2;
};

struct GroundTruth {
  Signal f;  // on retrieval_time_axis(lattice)
};

struct RetrievalResult {
  Signal f_rec;
  TFGrid F_rec;  // on the input lattice
  int iterations = 0;
  bool stalled = false;
  double measurement_residual_rel = 0.0;        // || |F| - |F_rec| || / ||F||
  std::optional<double> time_residual_rel;      // min_alpha ||f - e^{i alpha} f_rec|| / ||f||
  std::optional<TFGrid> phase_map;              // arg(F / F_rec) above the floor, else 0
  std::vector<double> residual_log;             // one entry per iteration
};

TimeAxis retrieval_time_axis(const Lattice& lattice);

// Alternating projections: F <- |F_meas| exp(i arg(P F)) with P the
// orthogonal projection onto the range of the Gabor analysis operator on
// the full-band extension of the lattice (extra rows measured as zero).
RetrievalResult retrieve(const TFGrid& magnitude, int iters, std::uint64_t seed,
                         const std::optional<GroundTruth>& truth = std::nullopt, const RetrievalOptions& options = {});

struct PhaseDiagnosis {
  double mean_phase = 0.0;
  double circular_std = 0.0;
  std::size_t cells = 0;
  bool degenerate = false;
};

// Circular statistics of arg(F_true / F_rec) on each component's cells with
// |F_true| >= floor * max |F_true|.
std::vector<PhaseDiagnosis> diagnose_phases(const TFGrid& F_true, const TFGrid& F_rec, const AtollDecomposition& dec,
                                            double floor = 1e-2);

}  // namespace atollpr
