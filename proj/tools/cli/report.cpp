#include "report.hpp"

#include <fstream>

#include "atollpr/error.hpp"
#include "atollpr/tfg_io.hpp"

namespace atollpr::cli {

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

json to_json(const Lattice& lat) {
  return {{"origin_x", lat.origin_x}, {"origin_y", lat.origin_y}, {"dx", lat.dx},
          {"dy", lat.dy},             {"nx", lat.nx},             {"ny", lat.ny}};
}

json to_json(const ParamDomain& d) {
  json j{{"shape", shape_name(d)}};
  if (const auto* disc = std::get_if<Disc>(&d)) {
    j["center"] = to_json(disc->center);
    j["r"] = disc->r;
  } else if (const auto* a = std::get_if<Annulus>(&d)) {
    j["center"] = to_json(a->center);
    j["r"] = a->r;
    j["s"] = a->s;
  } else {
    j["cells"] = std::get<Raster>(d).mask.count();
  }
  return j;
}

json to_json(const StabilityCertificate& c) {
  json prov = json::object();
  for (const auto& [k, v] : c.provenance) prov[k] = provenance_name(v);
  json centres = json::array();
  for (cd z : c.lagoon_centres) centres.push_back(to_json(z));
  return {{"component_id", c.component_id},
          {"p", c.p},
          {"t", c.t},
          {"normalizer", c.normalizer},
          {"shape", c.shape},
          {"z0", to_json(c.z0)},
          {"dist_z0", c.dist_z0},
          {"C_samp", c.C_samp},
          {"C_poinc_classical", c.C_poinc_classical},
          {"C_poinc_analytic", c.C_poinc_analytic},
          {"C_trace", c.C_trace},
          {"C_bound", c.C_bound},
          {"var_eta", c.var_eta},
          {"lagoon_centres", centres},
          {"lagoon_radii", c.lagoon_radii},
          {"lagoon_terms", c.lagoon_terms},
          {"c_uniform", c.c_uniform},
          {"C_total", c.C_total},
          {"delta", c.delta},
          {"Delta", c.Delta},
          {"bound_value", c.bound_value},
          {"provenance", prov},
          {"calibration_version", c.calibration_version}};
}

namespace {
json to_json(const ComponentAlignment& a) {
  return {{"alpha", a.alpha}, {"residual", a.residual}, {"degenerate", a.degenerate}};
}
}  // namespace

json to_json(const PhaseAlignmentReport& r) {
  json comps = json::array();
  for (const auto& c : r.components) comps.push_back(to_json(c));
  return {{"components", comps},
          {"global", to_json(r.global)},
          {"component_sum", r.component_sum()},
          {"measurement_residual", r.measurement_residual},
          {"ratio", r.ratio}};
}

json to_json(const PhaseDiagnosis& d) {
  return {{"mean_phase", d.mean_phase}, {"circular_std", d.circular_std}, {"cells", d.cells}, {"degenerate", d.degenerate}};
}

json write_decomposition(const AtollDecomposition& dec, const std::filesystem::path& dir, const std::string& stem) {
  json comps = json::array();
  for (std::size_t j = 0; j < dec.size(); ++j) {
    const AtollComponent& c = dec.components[j];
    const std::string base = stem + "_c" + std::to_string(j);
    write_tfg(dir / (base + "_D.tfg"), c.D);
    write_tfg(dir / (base + "_Dplus.tfg"), c.D_plus);
    json lags = json::array();
    for (std::size_t i = 0; i < c.lagoons.size(); ++i) {
      const std::string name = base + "_lagoon" + std::to_string(i) + ".tfg";
      write_tfg(dir / name, c.lagoons[i]);
      lags.push_back({{"mask", name}, {"area", c.lagoons[i].area()}});
    }
    comps.push_back({{"id", j},
                     {"D", base + "_D.tfg"},
                     {"D_plus", base + "_Dplus.tfg"},
                     {"area_D", c.D.area()},
                     {"area_D_plus", c.D_plus.area()},
                     {"lagoons", lags},
                     {"delta", c.delta},
                     {"Delta", c.Delta},
                     {"epsilon", c.epsilon},
                     {"parent", c.parent},
                     {"fit", to_json(c.shape.domain)},
                     {"fit_residual", c.shape.residual}});
  }
  return {{"lattice", to_json(dec.lattice)},
          {"threshold", dec.threshold},
          {"nested", dec.has_nesting()},
          {"components", comps}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::io, "cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
  if (!os) fail(ErrorKind::io, "write failed: " + path.string());
}

}  // namespace atollpr::cli
