#include "atollpr/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"

namespace atollpr {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

cd cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Integer n with |x - n| <= 1e-9 |x|, or 0.
int integer_ratio(double x) {
  const double r = std::round(x);
  if (r >= 1.0 && std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
  return 0;
}

// Sample index window [lo, hi] with |t_k - x| <= R, clipped to [0, n).
std::pair<long, long> window_range(const TimeAxis& a, double x) {
  long lo = static_cast<long>(std::ceil((x - kWindowRadius - a.t0) * a.sample_rate - 1e-9));
  long hi = static_cast<long>(std::floor((x + kWindowRadius - a.t0) * a.sample_rate + 1e-9));
  lo = std::max(lo, 0L);
  hi = std::min(hi, static_cast<long>(a.n) - 1);
  return {lo, hi};
}

long pos_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

// ---- Signal -------------------------------------------------------------

Signal::Signal(std::vector<cd> samples, double sample_rate, double t0)
    : samples_(std::move(samples)), fs_(sample_rate), t0_(t0) {
  if (samples_.size() < 2) fail(ErrorKind::structural, "signal needs at least 2 samples");
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) fail(ErrorKind::structural, "sample rate must be positive");
  if (!std::isfinite(t0_)) fail(ErrorKind::structural, "t0 must be finite");
  for (const cd& v : samples_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorKind::domain, "signal samples must be finite");
}

Signal::Signal(const std::vector<double>& samples, double sample_rate, double t0)
    : Signal(std::vector<cd>(samples.begin(), samples.end()), sample_rate, t0) {}

double Signal::norm() const {
  std::vector<double> t(samples_.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::norm(samples_[k]);
  return std::sqrt(pairwise_sum(t) / fs_);
}

double signal_distance(const Signal& a, const Signal& b) {
  if (a.size() != b.size() || a.sample_rate() != b.sample_rate() || a.t0() != b.t0())
    fail(ErrorKind::structural, "signals live on different time axes");
  std::vector<double> t(a.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::norm(a[k] - b[k]);
  return std::sqrt(pairwise_sum(t) / a.sample_rate());
}

// ---- lattices and axes ----------------------------------------------------

namespace {
int band_rows(const Lattice& lat) {
  const double ymax = std::max(std::abs(lat.y(0)), std::abs(lat.y_max()));
  const int need = static_cast<int>(std::ceil(2.0 * ymax / lat.dy - 1e-9));
  return std::max({lat.ny, need, 2});
}
}  // namespace

Lattice full_band_lattice(const Lattice& lattice) {
  lattice.validate();
  Lattice out = lattice;
  out.ny = band_rows(lattice);
  return out;
}

TimeAxis default_time_axis(const Lattice& lattice) {
  lattice.validate();
  const double fs = band_rows(lattice) * lattice.dy;
  const double span = lattice.x_max() - lattice.x(0) + 2.0 * kWindowRadius;
  const auto n = static_cast<std::size_t>(std::floor(span * fs + 1e-9)) + 1;
  return {lattice.x(0) - kWindowRadius, fs, n};
}

// ---- GaborFrame -----------------------------------------------------------

GaborFrame::GaborFrame(Lattice lattice, TimeAxis axis) : lattice_(lattice), axis_(axis) {
  lattice_.validate();
  if (axis_.n < 2 || !(axis_.sample_rate > 0.0)) fail(ErrorKind::structural, "invalid time axis");
  period_ = integer_ratio(axis_.sample_rate / lattice_.dy);
  w_.assign(axis_.n, 0.0);
  for (std::size_t k = 0; k < axis_.n; ++k) {
    const double t = axis_.t0 + static_cast<double>(k) / axis_.sample_rate;
    double s = 0.0;
    const int i_lo = std::max(0, static_cast<int>(std::ceil((t - kWindowRadius - lattice_.origin_x) / lattice_.dx)));
    const int i_hi =
        std::min(lattice_.nx - 1, static_cast<int>(std::floor((t + kWindowRadius - lattice_.origin_x) / lattice_.dx)));
    for (int i = i_lo; i <= i_hi; ++i) {
      const double p = window(t - lattice_.x(i));
      s += p * p;
    }
    w_[k] = lattice_.dx * s;
  }
}

std::vector<cd> GaborFrame::analysis(const std::vector<cd>& samples) const {
  if (samples.size() != axis_.n) fail(ErrorKind::structural, "sample count does not match the time axis");
  const Lattice& lat = lattice_;
  const double h = 1.0 / axis_.sample_rate;
  std::vector<cd> out(lat.size());
  parallel_for(static_cast<std::size_t>(lat.nx), [&](std::size_t b, std::size_t e) {
    std::vector<cd> buf;
    for (std::size_t ii = b; ii < e; ++ii) {
      const int i = static_cast<int>(ii);
      const double x = lat.x(i);
      const auto [lo, hi] = window_range(axis_, x);
      if (fft_mode()) {
        const int N = period_;
        buf.assign(static_cast<std::size_t>(N), cd{});
        for (long k = lo; k <= hi; ++k) {
          const double t = axis_.t0 + static_cast<double>(k) * h;
          buf[pos_mod(k, N)] += samples[k] * window(t - x) * cis(-kTwoPi * t * lat.origin_y);
        }
        fft_inplace(buf, -1);
        for (int j = 0; j < lat.ny; ++j)
          out[lat.index(i, j)] = h * cis(-kTwoPi * axis_.t0 * j * lat.dy) * buf[pos_mod(j, N)];
      } else {
        for (int j = 0; j < lat.ny; ++j) {
          const double y = lat.y(j);
          cd acc{};
          for (long k = lo; k <= hi; ++k) {
            const double t = axis_.t0 + static_cast<double>(k) * h;
            acc += samples[k] * window(t - x) * cis(-kTwoPi * t * y);
          }
          out[lat.index(i, j)] = h * acc;
        }
      }
    }
  });
  return out;
}

std::vector<cd> GaborFrame::synthesis(const std::vector<cd>& values) const {
  const Lattice& lat = lattice_;
  if (values.size() != lat.size()) fail(ErrorKind::structural, "grid size does not match the frame lattice");
  const double h = 1.0 / axis_.sample_rate;
  const double scale = lat.dx * lat.dy;
  std::vector<cd> out(axis_.n);
  if (fft_mode()) {
    const int N = period_;
    // Column spectra first, then per-sample sums over columns in a fixed order.
    std::vector<cd> cols(static_cast<std::size_t>(lat.nx) * N);
    parallel_for(static_cast<std::size_t>(lat.nx), [&](std::size_t b, std::size_t e) {
      std::vector<cd> buf;
      for (std::size_t ii = b; ii < e; ++ii) {
        const int i = static_cast<int>(ii);
        buf.assign(static_cast<std::size_t>(N), cd{});
        for (int j = 0; j < lat.ny; ++j)
          buf[pos_mod(j, N)] += values[lat.index(i, j)] * cis(kTwoPi * axis_.t0 * j * lat.dy);
        fft_inplace(buf, +1);
        std::copy(buf.begin(), buf.end(), cols.begin() + static_cast<long>(ii) * N);
      }
    });
    parallel_for(axis_.n, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const double t = axis_.t0 + static_cast<double>(k) * h;
        const int i_lo = std::max(0, static_cast<int>(std::ceil((t - kWindowRadius - lat.origin_x) / lat.dx)));
        const int i_hi = std::min(lat.nx - 1, static_cast<int>(std::floor((t + kWindowRadius - lat.origin_x) / lat.dx)));
        cd acc{};
        const long km = pos_mod(static_cast<long>(k), N);
        for (int i = i_lo; i <= i_hi; ++i) {
          const double x = lat.x(i);
          if (std::abs(t - x) > kWindowRadius) continue;
          acc += window(t - x) * cols[static_cast<std::size_t>(i) * N + km];
        }
        out[k] = scale * cis(kTwoPi * t * lat.origin_y) * acc;
      }
    });
  } else {
    parallel_for(axis_.n, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const double t = axis_.t0 + static_cast<double>(k) * h;
        const int i_lo = std::max(0, static_cast<int>(std::ceil((t - kWindowRadius - lat.origin_x) / lat.dx)));
        const int i_hi = std::min(lat.nx - 1, static_cast<int>(std::floor((t + kWindowRadius - lat.origin_x) / lat.dx)));
        cd acc{};
        for (int i = i_lo; i <= i_hi; ++i) {
          const double x = lat.x(i);
          if (std::abs(t - x) > kWindowRadius) continue;
          cd col{};
          for (int j = 0; j < lat.ny; ++j) col += values[lat.index(i, j)] * cis(kTwoPi * t * lat.y(j));
          acc += window(t - x) * col;
        }
        out[k] = scale * acc;
      }
    });
  }
  return out;
}

std::vector<cd> GaborFrame::pseudo_inverse(const std::vector<cd>& values) const {
  // V*V = diag(w) + E, where E couples samples one frequency period apart
  // through window overlap (|E| <= phi(1/(2dy))^2). Jacobi sweeps on the
  // samples with w above the floor remove E to rounding level.
  const auto b = synthesis(values);
  const double floor = kFloor * kWindowEnergy;
  std::vector<cd> f(b.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = w_[k] >= floor ? b[k] / w_[k] : cd{};
  for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
    const auto g = synthesis(analysis(f));
    for (std::size_t k = 0; k < f.size(); ++k)
      if (w_[k] >= floor) f[k] += (b[k] - g[k]) / w_[k];
  }
  return f;
}

// ---- Gabor ----------------------------------------------------------------

TFGrid gabor_forward(const Signal& f, const Lattice& lattice, GaborOptions options) {
  lattice.validate();
  const double nyq = 0.5 * f.sample_rate();
  if (std::max(std::abs(lattice.y(0)), std::abs(lattice.y_max())) > nyq * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "lattice frequency range exceeds the Nyquist frequency " << nyq;
    fail(ErrorKind::domain, os.str());
  }
  if (!options.zero_extend) {
    const double tol = 1.0 / f.sample_rate();
    if (f.t0() > lattice.x(0) - kWindowRadius + tol || f.t_last() < lattice.x_max() + kWindowRadius - tol) {
      std::ostringstream os;
      os << "signal support [" << f.t0() << ", " << f.t_last() << "] does not cover the lattice x-range ["
         << lattice.x(0) << ", " << lattice.x_max() << "] plus the window radius " << kWindowRadius;
      fail(ErrorKind::domain, os.str());
    }
  }
  const GaborFrame frame(lattice, TimeAxis{f.t0(), f.sample_rate(), f.size()});
  return TFGrid(lattice, frame.analysis(f.samples()));
}

TFGrid gabor_forward(const Signal& f, const GaborSpec& spec, GaborOptions options) {
  return gabor_forward(f, spec.lattice(), options);
}

Signal gabor_inverse(const TFGrid& F) { return gabor_inverse(F, default_time_axis(F.lattice())); }

Signal gabor_inverse(const TFGrid& F, const TimeAxis& axis) {
  const Lattice& lat = F.lattice();
  if (lat.dx * lat.dy > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "lattice density dx*dy = " << lat.dx * lat.dy << " exceeds 1; Gabor inversion is not stable";
    fail(ErrorKind::domain, os.str());
  }
  const GaborFrame frame(lat, axis);
  return Signal(frame.pseudo_inverse(F.values()), axis.sample_rate, axis.t0);
}

// ---- spectra --------------------------------------------------------------

std::vector<cd> spectrum(const Signal& f) {
  const std::size_t n = f.size();
  std::vector<cd> S(f.samples());
  fft_inplace(S, -1);
  const double T = f.duration();
  const double h = 1.0 / f.sample_rate();
  for (std::size_t m = 0; m < n; ++m) {
    const long sm = m <= n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
    S[m] *= h * cis(-kTwoPi * f.t0() * static_cast<double>(sm) / T);
  }
  return S;
}

Signal from_spectrum(const std::vector<cd>& S, double sample_rate, double t0) {
  const std::size_t n = S.size();
  const double T = static_cast<double>(n) / sample_rate;
  std::vector<cd> buf(S);
  for (std::size_t m = 0; m < n; ++m) {
    const long sm = m <= n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
    buf[m] *= cis(kTwoPi * t0 * static_cast<double>(sm) / T) / T;
  }
  fft_inplace(buf, +1);
  return Signal(std::move(buf), sample_rate, t0);
}

double negative_frequency_fraction(const Signal& f) {
  const auto S = spectrum(f);
  const std::size_t n = S.size();
  std::vector<double> neg, all(n);
  for (std::size_t m = 0; m < n; ++m) {
    all[m] = std::norm(S[m]);
    if (2 * m >= n) neg.push_back(all[m]);
  }
  const double total = pairwise_sum(all);
  return total > 0.0 ? pairwise_sum(neg) / total : 0.0;
}

Signal analytic_part(const Signal& f) {
  const std::size_t n = f.size();
  std::vector<cd> buf(f.samples());
  fft_inplace(buf, -1);
  buf[0] *= 0.5;
  for (std::size_t m = 1; m < n; ++m) {
    if (2 * m == n) buf[m] *= 0.5;
    else if (2 * m > n) buf[m] = 0.0;
  }
  fft_inplace(buf, +1);
  for (auto& v : buf) v /= static_cast<double>(n);
  return Signal(std::move(buf), f.sample_rate(), f.t0());
}

// ---- Cauchy wavelet ---------------------------------------------------------

TFGrid cauchy_forward(const Signal& f, const CauchySpec& spec) {
  if (spec.order < 1) fail(ErrorKind::precondition, "Cauchy wavelet order must be >= 1");
  if (!(spec.y_min > 0.0)) fail(ErrorKind::domain, "Cauchy lattice must lie strictly above y = 0");
  const Lattice lat = spec.lattice();
  const double neg = negative_frequency_fraction(f);
  if (neg > 1e-10) {
    std::ostringstream os;
    os << "signal is not analytic: negative-frequency energy fraction " << neg << " exceeds 1e-10";
    fail(ErrorKind::precondition, os.str());
  }
  const auto S = spectrum(f);
  const std::size_t n = f.size();
  const double T = f.duration();
  const std::size_t M = (n - 1) / 2;  // strictly positive bins below Nyquist
  const int q = integer_ratio(lat.dx * f.sample_rate());
  const int s = spec.order;
  std::vector<cd> out(lat.size());
  parallel_for(static_cast<std::size_t>(lat.ny), [&](std::size_t b, std::size_t e) {
    std::vector<cd> c(M + 1), buf;
    for (std::size_t jj = b; jj < e; ++jj) {
      const int j = static_cast<int>(jj);
      const double y = lat.y(j);
      for (std::size_t m = 1; m <= M; ++m) {
        const double w = static_cast<double>(m) / T;
        const double yw = y * w;
        c[m] = S[m] * std::sqrt(y) * std::pow(yw, s) * std::exp(-kTwoPi * yw) / T;
      }
      if (q > 0) {
        buf.assign(n, cd{});
        for (std::size_t m = 1; m <= M; ++m) buf[m] = c[m] * cis(kTwoPi * lat.origin_x * static_cast<double>(m) / T);
        fft_inplace(buf, +1);
        for (int i = 0; i < lat.nx; ++i)
          out[lat.index(i, j)] = buf[static_cast<std::size_t>(pos_mod(static_cast<long>(i) * q, static_cast<long>(n)))];
      } else {
        for (int i = 0; i < lat.nx; ++i) {
          cd acc{};
          for (std::size_t m = 1; m <= M; ++m) acc += c[m] * cis(kTwoPi * lat.x(i) * static_cast<double>(m) / T);
          out[lat.index(i, j)] = acc;
        }
      }
    }
  });
  return TFGrid(lat, std::move(out));
}

}  // namespace atollpr
