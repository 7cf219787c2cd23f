#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "atollpr/alignment.hpp"
#include "atollpr/analytic.hpp"
#include "atollpr/atoll.hpp"
#include "atollpr/audio.hpp"
#include "atollpr/constants.hpp"
#include "atollpr/error.hpp"
#include "atollpr/parallel.hpp"
#include "atollpr/retrieval.hpp"
#include "atollpr/tfg_io.hpp"
#include "atollpr/transforms.hpp"
#include "report.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;
using namespace atollpr;
using atollpr::cli::json;

namespace {

struct Global {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir = ".";
};

struct Segmentation {
  std::optional<double> delta;
  double delta_rel = 0.05;
  std::optional<double> min_area;

  void add(CLI::App* app, double default_rel) {
    delta_rel = default_rel;
    app->add_option("--delta", delta, "Absolute segmentation threshold (overrides --delta-rel)")->check(CLI::PositiveNumber);
    app->add_option("--delta-rel", delta_rel, "Threshold as a fraction of max |F|")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--min-area", min_area, "Minimum component area [default: 9 cells]")->check(CLI::NonNegativeNumber);
  }
  AtollDecomposition run(const TFGrid& F) const {
    const TFGrid mag = magnitude(F);
    const double d = delta.value_or(delta_rel * mag.max_abs());
    if (!(d > 0.0)) fail(ErrorKind::precondition, "segmentation threshold is zero (all-zero grid?)");
    return segment(mag, d, min_area);
  }
};

struct LatticeArgs {
  double dx = 0.25, dy = 0.25;
  std::optional<double> x_min, x_max, y_min, y_max;

  void add(CLI::App* app) {
    app->add_option("--dx", dx, "Time step of the lattice")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--dy", dy, "Frequency step of the lattice")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--x-min", x_min, "Lattice time range start [default: signal start]");
    app->add_option("--x-max", x_max, "Lattice time range end [default: signal end]");
    app->add_option("--y-min", y_min, "Lattice frequency range start [default: full band]");
    app->add_option("--y-max", y_max, "Lattice frequency range end [default: full band]");
  }
  bool explicit_ranges() const { return x_min || x_max || y_min || y_max; }
};

fs::path out_path(const Global& g, const std::string& name) { return fs::path(g.out_dir) / name; }

void ensure_out_dir(const Global& g) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory " + g.out_dir + ": " + ec.message());
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) fail(ErrorKind::precondition, "cannot parse number list: " + s);
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::precondition, "empty number list");
  return out;
}

Normalizer make_normalizer(const std::string& name, int order) {
  if (name == "none") return NoNormalizer{};
  if (name == "gabor") return GaborNormalizer{};
  if (name == "cauchy") return CauchyNormalizer{order};
  fail(ErrorKind::precondition, "unknown normalizer: " + name);
}

void warn(const std::string& msg) { std::cerr << json{{"warning", msg}}.dump() << "\n"; }

void print_summary(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- transform ---------------------------------------------------------------

struct TransformArgs {
  std::string input;
  std::string stem = "transform";
  double seconds_per_unit = kTwoBurstSecondsPerUnit;
  bool analytic = false;
  std::optional<int> cauchy;
  LatticeArgs lattice;
};

void cmd_transform(const Global& g, const TransformArgs& a) {
  ensure_out_dir(g);
  Signal s = to_signal(read_wav(a.input), TimeScale{a.seconds_per_unit});
  if (a.analytic) s = analytic_part(s);
  std::optional<TFGrid> F;
  json extra;
  if (a.cauchy) {
    const double nyq = 0.5 * s.sample_rate();
    const CauchySpec spec{*a.cauchy,
                          a.lattice.x_min.value_or(s.t0()),
                          a.lattice.x_max.value_or(s.t_last()),
                          a.lattice.y_min.value_or(a.lattice.dy),
                          a.lattice.y_max.value_or(nyq),
                          a.lattice.dx,
                          a.lattice.dy};
    F = cauchy_forward(s, spec);
    extra["transform"] = "cauchy";
    extra["order"] = *a.cauchy;
  } else {
    Lattice lat = audio_lattice(s, a.lattice.dx, a.lattice.dy);
    if (a.lattice.explicit_ranges()) {
      lat = GaborSpec{a.lattice.x_min.value_or(lat.x(0)), a.lattice.x_max.value_or(lat.x_max()),
                      a.lattice.y_min.value_or(lat.y(0)), a.lattice.y_max.value_or(lat.y_max()),
                      a.lattice.dx,                       a.lattice.dy}
                .lattice();
    }
    F = gabor_forward(s, lat, GaborOptions{true});
    extra["transform"] = "gabor";
  }
  const std::string cname = a.stem + ".tfg", mname = a.stem + "_mag.tfg";
  write_tfg(out_path(g, cname), *F, TfgKind::complex);
  write_tfg(out_path(g, mname), magnitude(*F), TfgKind::real);
  json j{{"lattice", cli::to_json(F->lattice())},
         {"complex", cname},
         {"magnitude", mname},
         {"signal", {{"samples", s.size()}, {"sample_rate", s.sample_rate()}, {"t0", s.t0()}}},
         {"max_abs", F->max_abs()}};
  j.update(extra);
  cli::write_json(out_path(g, a.stem + ".json"), j);
  print_summary(j);
}

// ---- segment -----------------------------------------------------------------

void cmd_segment(const Global& g, const std::string& input, const Segmentation& seg) {
  ensure_out_dir(g);
  const TFGrid F = read_tfg_grid(input);
  const AtollDecomposition dec = seg.run(F);
  if (dec.size() == 0) warn("no component survived segmentation");
  if (dec.has_nesting()) warn("nested atolls were split into separate components");
  const json j = cli::write_decomposition(dec, g.out_dir, "segment");
  cli::write_json(out_path(g, "decomposition.json"), j);
  print_summary(j);
}

// ---- certify -----------------------------------------------------------------

struct CertifyArgs {
  std::string input;
  std::optional<std::string> other;
  std::string eta = "gabor";
  int order = 1;
  double t = 0.5, p = 2.0, uniform_c = 1.0;
  std::string poincare = "eigensolve";
};

void cmd_certify(const Global& g, const CertifyArgs& a, const Segmentation& seg) {
  ensure_out_dir(g);
  const TFGrid F = read_tfg_grid(a.input);
  const Normalizer eta = make_normalizer(a.eta, a.order);
  TFGrid G = TFGrid::zeros(F.lattice());
  if (a.other) {
    const TFGrid F2 = read_tfg_grid(*a.other);
    require_same_lattice(F.lattice(), F2.lattice(), "certify");
    G = magnitude(subtract(magnitude(F), magnitude(F2)));
  }
  CertificateOptions opts;
  if (a.poincare == "closed-form") opts.poincare = PoincareMethod::closed_form;
  else if (a.poincare != "eigensolve") fail(ErrorKind::precondition, "unknown Poincare method: " + a.poincare);

  const AtollDecomposition dec = seg.run(F);
  if (dec.size() == 0) warn("empty decomposition; no certificates produced");
  std::vector<StabilityCertificate> certs(dec.size());
  parallel_for(dec.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      certs[j] = assemble_certificate(dec.components[j], eta, G, a.p, a.t, a.uniform_c, opts);
      certs[j].component_id = static_cast<int>(j);
    }
  });
  json cj = json::array();
  for (const auto& c : certs) cj.push_back(cli::to_json(c));
  const json j{{"decomposition", cli::write_decomposition(dec, g.out_dir, "certify")},
               {"certificates", cj},
               {"normalizer", a.eta},
               {"calibration_version", calibration().version}};
  cli::write_json(out_path(g, "certificates.json"), j);
  print_summary(j);
}

// ---- align / scramble --------------------------------------------------------

void cmd_align(const Global& g, const std::string& first, const std::string& second, const Segmentation& seg) {
  ensure_out_dir(g);
  const TFGrid F = read_tfg_grid(first);
  const TFGrid G = read_tfg_grid(second);
  require_same_lattice(F.lattice(), G.lattice(), "align");
  const AtollDecomposition dec = seg.run(F);
  if (dec.size() == 0) fail(ErrorKind::domain, "no component survived segmentation; nothing to align");
  const json j{{"alignment", cli::to_json(align_decomposition(F, G, dec))},
               {"decomposition", cli::write_decomposition(dec, g.out_dir, "align")}};
  cli::write_json(out_path(g, "alignment.json"), j);
  print_summary(j);
}

void cmd_scramble(const Global& g, const std::string& input, const std::string& alphas_s, const Segmentation& seg) {
  ensure_out_dir(g);
  const TFGrid F = read_tfg_grid(input);
  const AtollDecomposition dec = seg.run(F);
  const auto alphas = parse_list(alphas_s);
  if (alphas.size() != dec.size()) {
    std::ostringstream os;
    os << "got " << alphas.size() << " phases for " << dec.size() << " components";
    fail(ErrorKind::precondition, os.str());
  }
  const TFGrid S = scramble_phases(F, dec, alphas);
  write_tfg(out_path(g, "scrambled.tfg"), S);
  const json j{{"scrambled", "scrambled.tfg"},
               {"alphas", alphas},
               {"alignment", cli::to_json(align_decomposition(F, S, dec))},
               {"decomposition", cli::write_decomposition(dec, g.out_dir, "scramble")}};
  cli::write_json(out_path(g, "scramble.json"), j);
  print_summary(j);
}

// ---- retrieve ----------------------------------------------------------------

AudioBuffer peak_normalized(const Signal& s, int rate_hz) {
  AudioBuffer a = to_audio(s, rate_hz);
  double peak = 0.0;
  for (double v : a.samples) peak = std::max(peak, std::abs(v));
  if (peak > 1.0)
    for (double& v : a.samples) v /= peak;
  return a;
}

int rate_hz(double fs_units, double seconds_per_unit) {
  const double hz = fs_units / seconds_per_unit;
  const double r = std::round(hz);
  if (r < 1.0 || std::abs(hz - r) > 1e-6 * hz)
    fail(ErrorKind::precondition, "time scale does not give an integer WAV sample rate");
  return static_cast<int>(r);
}

void cmd_retrieve(const Global& g, const std::string& input, int iters, double spu) {
  ensure_out_dir(g);
  const TFGrid F = read_tfg_grid(input);
  const RetrievalResult r = retrieve(magnitude(F), iters, g.seed);
  write_tfg(out_path(g, "retrieved.tfg"), r.F_rec);
  {
    std::ofstream os(out_path(g, "retrieve_log.csv"));
    if (!os) fail(ErrorKind::io, "cannot write retrieve_log.csv");
    os << "iter,residual\n";
    os.precision(17);
    for (std::size_t k = 0; k < r.residual_log.size(); ++k) os << k + 1 << "," << r.residual_log[k] << "\n";
  }
  write_wav(out_path(g, "retrieved.wav"), peak_normalized(r.f_rec, rate_hz(r.f_rec.sample_rate(), spu)));
  const json j{{"iterations", r.iterations},
               {"stalled", r.stalled},
               {"seed", g.seed},
               {"measurement_residual_rel", r.measurement_residual_rel},
               {"retrieved", "retrieved.tfg"},
               {"log", "retrieve_log.csv"},
               {"wav", "retrieved.wav"}};
  cli::write_json(out_path(g, "retrieve.json"), j);
  print_summary(j);
}

// ---- audio-shift -------------------------------------------------------------

struct AudioArgs {
  std::string input;
  std::optional<double> alpha;
  std::optional<std::string> alphas;
  double seconds_per_unit = kTwoBurstSecondsPerUnit;
  double dx = 0.25, dy = 0.25;
};

double magnitude_residual(const AudioBuffer& in, const AudioBuffer& out, const Lattice& lat, TimeScale sc) {
  const TFGrid V = gabor_forward(analytic_part(to_signal(in, sc)), lat, GaborOptions{true});
  const TFGrid W = gabor_forward(analytic_part(to_signal(out, sc)), lat, GaborOptions{true});
  const DomainMask all = DomainMask::full(lat);
  return lp_norm(subtract(magnitude(W), magnitude(V)), all, 2.0) / lp_norm(V, all, 2.0);
}

json audio_shift(const Global& g, const AudioBuffer& in, const AudioArgs& a, const Segmentation& seg,
                 const std::string& wav_name) {
  const TimeScale sc{a.seconds_per_unit};
  const Signal s = to_signal(in, sc);
  const Lattice lat = audio_lattice(s, a.dx, a.dy);
  AudioBuffer out;
  json j;
  if (a.alphas) {
    const TFGrid V = gabor_forward(analytic_part(s), lat, GaborOptions{true});
    const AtollDecomposition dec = seg.run(V);
    const auto alphas = parse_list(*a.alphas);
    if (alphas.size() != dec.size()) {
      std::ostringstream os;
      os << "got " << alphas.size() << " phases for " << dec.size() << " components";
      fail(ErrorKind::precondition, os.str());
    }
    out = phase_shift_components(in, dec, alphas, sc);
    j["mode"] = "components";
    j["alphas"] = alphas;
    j["decomposition"] = cli::write_decomposition(dec, g.out_dir, "audio");
    j["leakage_rel"] = concentration(V, dec.union_D()) / lp_norm(V, DomainMask::full(lat), 2.0);
  } else {
    const double alpha = a.alpha.value_or(0.0);
    out = phase_shift_global(in, alpha);
    j["mode"] = "global";
    j["alpha"] = alpha;
    j["time_formula_discrepancy"] = relative_l2(phase_shift_time_formula(in, alpha), out.samples);
  }
  write_wav(out_path(g, wav_name), out);
  j["wav"] = wav_name;
  j["lattice"] = cli::to_json(lat);
  j["magnitude_residual_rel"] = magnitude_residual(in, out, lat, sc);
  j["waveform_change_rel"] = relative_l2(out.samples, in.samples);
  return j;
}

void cmd_audio_shift(const Global& g, const AudioArgs& a, const Segmentation& seg) {
  ensure_out_dir(g);
  if (a.alpha && a.alphas) fail(ErrorKind::precondition, "--alpha and --alphas are mutually exclusive");
  const json j = audio_shift(g, read_wav(a.input), a, seg, "shifted.wav");
  cli::write_json(out_path(g, "audio_shift.json"), j);
  print_summary(j);
}

// ---- demos -------------------------------------------------------------------

void write_readme(const Global& g, const std::string& title, const json& numbers) {
  std::ofstream os(out_path(g, "README.txt"));
  os << title << "\n\n";
  for (const auto& [k, v] : numbers.items()) os << k << ": " << v.dump() << "\n";
}

void demo_instability(const Global& g) {
  const auto sc = cli::two_atom_scenario();
  const TFGrid F = gabor_forward(sc.f, sc.lattice);
  const Segmentation seg{std::nullopt, 1e-3, std::nullopt};
  const AtollDecomposition dec = seg.run(F);
  std::vector<double> alphas(dec.size(), 0.0);
  for (std::size_t j = 0; j < alphas.size(); ++j) alphas[j] = j % 2 ? M_PI : 0.0;
  const TFGrid G = scramble_phases(F, dec, alphas);
  write_tfg(out_path(g, "F.tfg"), F);
  write_tfg(out_path(g, "G.tfg"), G);
  const PhaseAlignmentReport rep = align_decomposition(F, G, dec);
  const double fnorm = lp_norm(F, dec.union_D(), 2.0);
  const json numbers{{"components", dec.size()},
                     {"measurement_residual_w12", rep.measurement_residual},
                     {"global_residual", rep.global.residual},
                     {"global_residual_over_norm", rep.global.residual / fnorm},
                     {"component_residual_sum", rep.component_sum()}};
  cli::write_json(out_path(g, "instability.json"),
                  {{"numbers", numbers},
                   {"alignment", cli::to_json(rep)},
                   {"decomposition", cli::write_decomposition(dec, g.out_dir, "instability")}});
  write_readme(g, "Component-wise phase scramble of a two-atom signal", numbers);
  print_summary(numbers);
}

void demo_figure2(const Global& g, int iters, int runs) {
  const auto sc = cli::two_atom_scenario();
  const TFGrid F = gabor_forward(sc.f, sc.lattice);
  const Segmentation seg{std::nullopt, 1e-3, std::nullopt};
  const AtollDecomposition dec = seg.run(F);
  std::ofstream csv(out_path(g, "figure2.csv"));
  csv.precision(17);
  csv << "seed,iterations,measurement_residual,time_residual";
  for (std::size_t j = 0; j < dec.size(); ++j) csv << ",mean_phase_" << j << ",circular_std_" << j;
  csv << "\n";
  int split = 0;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t seed = g.seed + static_cast<std::uint64_t>(r);
    const RetrievalResult res = retrieve(magnitude(F), iters, seed, GroundTruth{sc.f});
    const auto diag = diagnose_phases(F, res.F_rec, dec);
    csv << seed << "," << res.iterations << "," << res.measurement_residual_rel << "," << *res.time_residual_rel;
    for (const auto& d : diag) csv << "," << d.mean_phase << "," << d.circular_std;
    csv << "\n";
    if (*res.time_residual_rel > 0.1) ++split;
  }
  const json numbers{{"runs", runs}, {"iterations", iters}, {"components", dec.size()},
                     {"runs_with_time_residual_above_0.1", split}, {"csv", "figure2.csv"}};
  write_readme(g, "Per-component phase offsets of retrieved two-atom signals", numbers);
  print_summary(numbers);
}

void demo_audio(const Global& g) {
  const AudioBuffer in = two_burst_signal();
  write_wav(out_path(g, "two_burst.wav"), in);
  AudioArgs a;
  a.alphas = "0," + std::to_string(M_PI / 2);
  const Segmentation seg{std::nullopt, 1e-4, std::nullopt};
  const json j = audio_shift(g, in, a, seg, "two_burst_shifted.wav");
  cli::write_json(out_path(g, "audio.json"), j);
  const json numbers{{"magnitude_residual_rel", j["magnitude_residual_rel"]},
                     {"waveform_change_rel", j["waveform_change_rel"]},
                     {"alphas", j["alphas"]}};
  write_readme(g, "Per-component phase shift of the two-burst signal", numbers);
  print_summary(numbers);
}

int report_error(const std::string& kind, const std::string& msg, int code) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval stability toolkit: transforms, atoll segmentation, certificates, retrieval, audio"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for produced artifacts")->capture_default_str();

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Gabor or Cauchy transform of a mono WAV file");
  transform->add_option("--input", ta.input, "Input WAV")->required();
  transform->add_option("--stem", ta.stem, "Output file stem")->capture_default_str();
  transform->add_option("--time-scale", ta.seconds_per_unit, "Seconds per time-frequency unit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  transform->add_flag("--analytic", ta.analytic, "Transform the analytic part of the signal");
  transform->add_option("--cauchy", ta.cauchy, "Cauchy wavelet transform of this order instead of Gabor")
      ->check(CLI::PositiveNumber);
  ta.lattice.add(transform);

  std::string seg_input;
  Segmentation seg_s;
  auto* segment_cmd = app.add_subcommand("segment", "Atoll decomposition of a TFG grid");
  segment_cmd->add_option("--input", seg_input, "Input TFG (complex or magnitude)")->required();
  seg_s.add(segment_cmd, 0.05);

  CertifyArgs ca;
  Segmentation seg_c;
  auto* certify = app.add_subcommand("certify", "Stability certificates per atoll component");
  certify->add_option("--input", ca.input, "Input TFG")->required();
  certify->add_option("--other", ca.other, "Second measurement; certificates use G = ||F| - |F2||");
  certify->add_option("--eta", ca.eta, "Normalizer: none, gabor or cauchy")
      ->check(CLI::IsMember({"none", "gabor", "cauchy"}))
      ->capture_default_str();
  certify->add_option("--order", ca.order, "Cauchy wavelet order s")->check(CLI::PositiveNumber)->capture_default_str();
  certify->add_option("--t", ca.t, "Sampling parameter t")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  certify->add_option("--p", ca.p, "Norm exponent (only 2 is implemented)")->capture_default_str();
  certify->add_option("--uniform-c", ca.uniform_c, "Uniform constant c")->check(CLI::PositiveNumber)->capture_default_str();
  certify->add_option("--poincare", ca.poincare, "Poincare constant: eigensolve or closed-form")
      ->check(CLI::IsMember({"eigensolve", "closed-form"}))
      ->capture_default_str();
  seg_c.add(certify, 0.05);

  std::string al_first, al_second;
  Segmentation seg_a;
  auto* align = app.add_subcommand("align", "Per-component phase alignment of two grids");
  align->add_option("--first", al_first, "Reference TFG")->required();
  align->add_option("--second", al_second, "TFG to align")->required();
  seg_a.add(align, 0.05);

  std::string sc_input, sc_alphas;
  Segmentation seg_sc;
  auto* scramble = app.add_subcommand("scramble", "Multiply each component by its own phase factor");
  scramble->add_option("--input", sc_input, "Input TFG")->required();
  scramble->add_option("--alphas", sc_alphas, "Comma-separated phases, one per component")->required();
  seg_sc.add(scramble, 0.05);

  std::string rt_input;
  int rt_iters = 500;
  double rt_spu = kTwoBurstSecondsPerUnit;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Phase retrieval from a magnitude grid");
  retrieve_cmd->add_option("--input", rt_input, "Magnitude (or complex) TFG")->required();
  retrieve_cmd->add_option("--iters", rt_iters, "Maximum iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  retrieve_cmd->add_option("--time-scale", rt_spu, "Seconds per time-frequency unit for the WAV output")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  AudioArgs aa;
  Segmentation seg_au;
  auto* audio = app.add_subcommand("audio-shift", "Global or per-component phase shift of a mono WAV file");
  audio->add_option("--input", aa.input, "Input WAV")->required();
  audio->add_option("--alpha", aa.alpha, "Global phase shift");
  audio->add_option("--alphas", aa.alphas, "Comma-separated per-component phases");
  audio->add_option("--time-scale", aa.seconds_per_unit, "Seconds per time-frequency unit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  audio->add_option("--dx", aa.dx, "Lattice time step")->check(CLI::PositiveNumber)->capture_default_str();
  audio->add_option("--dy", aa.dy, "Lattice frequency step")->check(CLI::PositiveNumber)->capture_default_str();
  seg_au.add(audio, 1e-4);

  std::string scenario;
  int demo_iters = 3000, demo_runs = 20;
  auto* demo = app.add_subcommand("demo", "Scripted scenarios: instability, figure2, audio");
  demo->add_option("scenario", scenario, "Scenario name")
      ->required()
      ->check(CLI::IsMember({"instability", "figure2", "audio"}));
  demo->add_option("--iters", demo_iters, "Retrieval iterations (figure2)")->capture_default_str();
  demo->add_option("--runs", demo_runs, "Retrieval seeds (figure2)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    set_thread_count(g.threads);
    if (*transform) cmd_transform(g, ta);
    else if (*segment_cmd) cmd_segment(g, seg_input, seg_s);
    else if (*certify) cmd_certify(g, ca, seg_c);
    else if (*align) cmd_align(g, al_first, al_second, seg_a);
    else if (*scramble) cmd_scramble(g, sc_input, sc_alphas, seg_sc);
    else if (*retrieve_cmd) cmd_retrieve(g, rt_input, rt_iters, rt_spu);
    else if (*audio) cmd_audio_shift(g, aa, seg_au);
    else if (*demo) {
      ensure_out_dir(g);
      if (scenario == "instability") demo_instability(g);
      else if (scenario == "figure2") demo_figure2(g, demo_iters, demo_runs);
      else demo_audio(g);
    }
  } catch (const Error& e) {
    return report_error(kind_name(e.kind()), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
