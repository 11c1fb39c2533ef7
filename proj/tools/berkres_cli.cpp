/**
 * @file berkres_cli.cpp
 *
 * Command-line front end: parse map files, dispatch to the exact analyses,
 * and emit deterministic reports.
 *
 * Subcommands
 *   analyze        resultant valuation and reduction type at the Gauss point
 *   iterate-check  R of the iterates against the predicted multiple N_n * R
 *   ordres         resultant valuation at a point or sampled along a segment
 *   minresloc      grid minimization of the resultant valuation on a segment
 *   weights        slope-break masses of the profile on a segment
 *   measure        truncated residue measure and the barycenter verdict
 *   theorem-check  the iteration-formula criterion at a semistable minimizer
 *   lattes         multiplication-by-m reports on the Tate curve family
 *
 * Exit codes
 *   0  the command ran; mathematical verdicts are reported in-band
 *   1  usage, file, or syntax errors
 *   2  degenerate input (vanishing resultant; undefined measure)
 *   3  inconclusive search domain (no decisive point found)
 *   4  precision or refinement needed (truncation too short, slope break
 *      off the grid, parameter outside a backend's range)
 *
 * Every report embeds the tool version and an FNV-1a hash of the exact
 * input, and every rational number is serialized as an exact "p/q" string;
 * two runs on identical inputs produce byte-identical output.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "berkres/berkovich.hpp"
#include "berkres/forms.hpp"
#include "berkres/lattes.hpp"
#include "berkres/measures.hpp"
#include "berkres/padic.hpp"
#include "berkres/puiseux.hpp"
#include "berkres/rational.hpp"
#include "berkres/reduction.hpp"
#include "berkres/residue.hpp"
#include "berkres/resultant.hpp"
#include "berkres/theorem.hpp"
#include "mapfile.hpp"

namespace {

using berkres::Rat;
using Json = nlohmann::ordered_json;

constexpr const char kVersion[] = "1.0.0";

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

struct OutputOptions {
  std::string json_path;
  std::string csv_path;
  bool quiet = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--json", out.json_path, "write the full report as JSON here ('-' for stdout)");
  cmd->add_option("--csv", out.csv_path, "write the report as key,value rows here ('-' for stdout)");
  cmd->add_flag("--quiet", out.quiet, "suppress the human-readable summary");
}

/** Depth-first flattening: objects by dotted keys, arrays by [index]. */
void flatten(const Json& v, const std::string& key, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    if (v.empty() && !key.empty()) rows.emplace_back(key, "{}");
    for (const auto& [k, child] : v.items()) flatten(child, key.empty() ? k : key + "." + k, rows);
  } else if (v.is_array()) {
    if (v.empty()) rows.emplace_back(key, "[]");
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "[" + std::to_string(i) + "]", rows);
  } else if (v.is_string()) {
    rows.emplace_back(key, v.get<std::string>());
  } else {
    rows.emplace_back(key, v.dump());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int emit_report(const Json& report, const OutputOptions& opts) {
  if (!opts.json_path.empty()) write_text(opts.json_path, report.dump(2) + "\n");
  if (!opts.csv_path.empty()) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report, "", rows);
    std::string text = "key,value\n";
    for (const auto& [k, v] : rows) text += csv_escape(k) + "," + csv_escape(v) + "\n";
    write_text(opts.csv_path, text);
  }
  if (!opts.quiet) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(report.at("result"), "", rows);
    for (const auto& [k, v] : rows) std::cout << k << " = " << v << "\n";
  }
  return 0;
}

Json envelope(const char* command, Json parameters, const berkres::tool::LoadedMap* map) {
  Json rep;
  rep["tool"] = "berkres";
  rep["version"] = kVersion;
  rep["command"] = command;
  Json input;
  if (map != nullptr) {
    input["kind"] = "map-file";
    input["path"] = map->path;
    input["bytes"] = map->bytes;
    input["fnv1a64"] = berkres::tool::hash_hex(map->hash);
    Json field;
    field["kind"] = map->field.kind;
    field["residue"] = map->field.residue;
    if (map->field.p != 0) field["p"] = map->field.p;
    if (map->field.kind == "laurent") field["ramification"] = map->field.ramification;
    input["field"] = field;
    input["degree"] = map->degree;
  } else {
    input["kind"] = "parameters";
    input["fnv1a64"] = berkres::tool::hash_hex(berkres::tool::fnv1a64(parameters.dump()));
  }
  rep["input"] = std::move(input);
  rep["parameters"] = std::move(parameters);
  return rep;
}

Json rat(const Rat& r) { return Json(r.to_string()); }

Json rho_mass_list(const std::vector<std::pair<Rat, Rat>>& pairs) {
  Json list = Json::array();
  for (const auto& [rho, mass] : pairs) {
    Json item;
    item["rho"] = rat(rho);
    item["mass"] = rat(mass);
    list.push_back(std::move(item));
  }
  return list;
}

// ---------------------------------------------------------------------------
// Point and segment arguments
//
// --at takes up to two tokens: a=<scalar> and rho=<rational>; a bare token
// is the radius exponent rho.  --segment takes up to three: a=<scalar>,
// lo=<rational>, hi=<rational>; bare tokens are lo then hi.
// ---------------------------------------------------------------------------

template <typename S>
berkres::TypeIIPoint<S> make_point(const std::vector<std::string>& tokens, const S& proto) {
  S center = berkres::scalar_zero_like(proto);
  std::optional<Rat> rho;
  for (const std::string& tk : tokens) {
    if (tk.rfind("a=", 0) == 0) {
      center = berkres::scalar_parse(proto, tk.substr(2));
    } else if (tk.rfind("rho=", 0) == 0) {
      rho = Rat::from_string(tk.substr(4));
    } else if (!rho.has_value()) {
      rho = Rat::from_string(tk);
    } else {
      throw berkres::parse_error("--at token not understood: " + tk);
    }
  }
  return berkres::TypeIIPoint<S>{std::move(center), rho.value_or(Rat(0))};
}

template <typename S>
berkres::SegmentSpec<S> make_segment(const std::vector<std::string>& tokens, long denominator,
                                     const S& proto) {
  S center = berkres::scalar_zero_like(proto);
  std::optional<Rat> lo, hi;
  std::vector<Rat> positional;
  for (const std::string& tk : tokens) {
    if (tk.rfind("a=", 0) == 0) center = berkres::scalar_parse(proto, tk.substr(2));
    else if (tk.rfind("lo=", 0) == 0) lo = Rat::from_string(tk.substr(3));
    else if (tk.rfind("hi=", 0) == 0) hi = Rat::from_string(tk.substr(3));
    else positional.push_back(Rat::from_string(tk));
  }
  if (positional.size() > 2) throw berkres::parse_error("--segment takes at most two bare endpoints");
  if (!positional.empty()) {
    if (lo.has_value()) throw berkres::parse_error("--segment: lo given twice");
    lo = positional[0];
  }
  if (positional.size() == 2) {
    if (hi.has_value()) throw berkres::parse_error("--segment: hi given twice");
    hi = positional[1];
  }
  return berkres::SegmentSpec<S>(std::move(center), lo.value_or(Rat(0)), hi.value_or(Rat(1)),
                                 denominator);
}

template <typename S>
Json segment_json(const berkres::SegmentSpec<S>& seg) {
  Json j;
  j["center"] = berkres::scalar_to_string(seg.center);
  j["lo"] = rat(seg.lo);
  j["hi"] = rat(seg.hi);
  j["denominator"] = seg.denominator;
  return j;
}

// ---------------------------------------------------------------------------
// Result builders (one per subcommand, generic over the coefficient field)
// ---------------------------------------------------------------------------

template <typename S>
Json analyze_result(const berkres::HomogeneousPair<S>& pair) {
  Json r;
  r["R"] = rat(berkres::normalized_ord_res(pair));
  r["normalization_shift"] = rat(pair.min_ord().value());
  const auto rep = berkres::reduce_normalized(pair);
  r["good_reduction"] = rep.good_reduction;
  r["semistable"] = rep.semistable;
  if (!rep.semistable) r["semistable_reason"] = rep.semistable_reason;
  r["in_indeterminacy"] = rep.in_indeterminacy;
  r["residue_degree"] = rep.residue_degree;
  r["common_degree"] = rep.common_degree;
  r["map_constant"] = rep.map_constant;
  if (rep.map_constant) r["constant_value"] = rep.constant_value.to_string();
  Json holes = Json::array();
  for (const auto& b : rep.holes) {
    Json h;
    h["at_infinity"] = b.at_infinity;
    h["depth"] = static_cast<long>(b.depth);
    if (!b.at_infinity) {
      h["factor"] = b.factor.to_string();
      Json roots = Json::array();
      for (const auto& root : b.located_roots) roots.push_back(berkres::res_to_string(root));
      h["located_roots"] = std::move(roots);
      h["fully_rational"] = b.fully_rational;
    }
    holes.push_back(std::move(h));
  }
  r["holes"] = std::move(holes);
  return r;
}

template <typename S>
Json iterate_check_result(const berkres::HomogeneousPair<S>& pair, long max_n, bool ring_identity) {
  const berkres::HomogeneousPair<S> norm = pair.normalized();
  Json r;
  r["R"] = rat(berkres::normalized_ord_res(norm));
  Json steps = Json::array();
  bool all = true;
  for (long n = 2; n <= max_n; ++n) {
    const berkres::IterationFormulaRecord rec = berkres::iteration_formula_check(norm, n);
    Json s;
    s["n"] = n;
    s["factor"] = rat(rec.factor);
    s["r_iterate"] = rat(rec.r_iterate);
    s["predicted"] = rat(rec.predicted);
    s["match"] = rec.match;
    if (ring_identity) s["ring_identity"] = berkres::resultant_power_identity_check(norm, n);
    all = all && rec.match;
    steps.push_back(std::move(s));
  }
  r["steps"] = std::move(steps);
  r["all_match"] = all;
  r["verdict"] = all ? "holds" : "fails";
  return r;
}

Json profile_json(const berkres::OrdResProfile& prof) {
  Json r;
  Json samples = Json::array();
  for (const auto& [rho, value] : prof.samples) {
    Json s;
    s["rho"] = rat(rho);
    s["value"] = rat(value);
    samples.push_back(std::move(s));
  }
  r["samples"] = std::move(samples);
  Json breaks = Json::array();
  for (const auto& b : prof.breakpoints) {
    Json j;
    j["rho"] = rat(b.rho);
    j["left_slope"] = rat(b.left_slope);
    j["right_slope"] = rat(b.right_slope);
    j["mass"] = rat(b.mass);
    breaks.push_back(std::move(j));
  }
  r["breakpoints"] = std::move(breaks);
  Json argmin = Json::array();
  for (const Rat& rho : prof.argmin) argmin.push_back(rat(rho));
  r["argmin"] = std::move(argmin);
  r["min_value"] = rat(prof.min_value);
  r["boundary_minimum"] = prof.boundary_minimum;
  r["interior_certified"] = prof.interior_certified;
  if (prof.left_slope_at_min.has_value()) r["left_slope_at_min"] = rat(*prof.left_slope_at_min);
  if (prof.right_slope_at_min.has_value()) r["right_slope_at_min"] = rat(*prof.right_slope_at_min);
  return r;
}

Json endpoint_json(const berkres::SegmentEndpointData& e) {
  Json j;
  j["rho"] = rat(e.rho);
  j["slope_into_segment"] = rat(e.slope_into_segment);
  j["one_sided_mass"] = rat(e.one_sided_mass);
  return j;
}

template <typename S>
Json weights_result(const berkres::HomogeneousPair<S>& pair, const berkres::SegmentSpec<S>& seg) {
  const berkres::OrdResProfile prof = berkres::min_res_loc_on_segment(pair, seg);
  const berkres::CrucialWeightReport cw = berkres::crucial_weights(prof, pair.degree());
  Json r;
  r["segment"] = segment_json(seg);
  r["min_value"] = rat(prof.min_value);
  Json argmin = Json::array();
  for (const Rat& rho : prof.argmin) argmin.push_back(rat(rho));
  r["argmin"] = std::move(argmin);
  r["lo_end"] = endpoint_json(cw.lo_end);
  Json interior = Json::array();
  for (const auto& [rho, mass] : cw.interior) {
    Json j;
    j["rho"] = rat(rho);
    j["mass"] = rat(mass);
    interior.push_back(std::move(j));
  }
  r["interior"] = std::move(interior);
  r["hi_end"] = endpoint_json(cw.hi_end);
  r["full_support_total"] = rat(cw.full_support_total());
  return r;
}

template <typename S>
Json measure_result(const berkres::HomogeneousPair<S>& pair, const berkres::TypeIIPoint<S>& at,
                    long nmax) {
  const berkres::HomogeneousPair<S> moved = berkres::conjugate_at(pair, at);
  const auto rm = berkres::residue_measure(moved, nmax);
  Json r;
  r["point"] = at.to_string();
  r["truncation_depth"] = nmax;
  r["zero_measure"] = rm.zero_measure;
  r["levels_used"] = rm.levels_used;
  Json dirs = Json::array();
  for (const auto& dm : rm.directions) {
    Json j;
    j["direction"] = dm.direction.to_string();
    j["mass_lower"] = rat(dm.mass_lower);
    j["mass_upper"] = rat(dm.mass_upper);
    dirs.push_back(std::move(j));
  }
  r["directions"] = std::move(dirs);
  r["unlocated_tail"] = rat(rm.unlocated_tail);
  r["barycenter_contains_gauss"] = berkres::to_string(berkres::barycenter_contains_gauss(rm));
  return r;
}

template <typename S>
Json theorem_result(const berkres::TheoremReport<S>& rep) {
  Json r;
  r["verdict"] = rep.holds ? "holds" : "fails";
  r["map"] = rep.map_description;
  r["coordinates"] = rep.coordinates.to_string();
  r["R"] = rat(rep.r_base);
  r["base_semistable"] = rep.base_semistable;
  r["in_indeterminacy"] = rep.in_indeterminacy;
  r["n_max"] = rep.n_max;
  Json steps = Json::array();
  for (const auto& st : rep.steps) {
    Json s;
    s["n"] = st.n;
    s["factor"] = rat(st.factor);
    s["r_iterate"] = rat(st.r_iterate);
    s["predicted"] = rat(st.predicted);
    s["match"] = st.match;
    s["iterate_semistable"] = st.iterate_semistable;
    steps.push_back(std::move(s));
  }
  r["steps"] = std::move(steps);
  r["witnesses"] = rep.witnesses;
  r["notes"] = rep.notes;
  return r;
}

// ---------------------------------------------------------------------------
// lattes
// ---------------------------------------------------------------------------

struct LattesArgs {
  long m = 0;
  long precision = 0;    // 0 = library default
  long denominator = 0;  // 0 = smallest grid holding every breakpoint
  bool verify = false;
  std::string residue = "Q";
  std::uint64_t p = 0;
  OutputOptions out;
};

long default_lattes_denominator(long m) {
  return std::lcm(std::lcm(4L, 2 * (m + 1)), 2 * (m - 1));
}

Json checked_json(const berkres::CheckedValue& cv, bool verify) {
  Json j;
  j["computed"] = rat(cv.computed);
  j["stable"] = cv.stable;
  if (verify) {
    j["predicted"] = rat(cv.predicted);
    j["match"] = cv.matches_prediction();
  }
  return j;
}

Json checked_weights_json(const berkres::CheckedWeights& cw, bool verify) {
  Json j;
  j["computed"] = rho_mass_list(cw.computed);
  j["stable"] = cw.stable;
  if (verify) {
    j["predicted"] = rho_mass_list(cw.predicted);
    j["match"] = cw.matches_prediction();
  }
  return j;
}

Json lattes_values_json(const berkres::detail::LattesValues& v) {
  Json j;
  j["precision"] = v.precision;
  j["r_gauss"] = rat(v.r_gauss);
  j["rho_star"] = rat(v.rho_star);
  j["unique_minimizer"] = v.unique_minimizer;
  j["min_value"] = rat(v.min_value);
  j["hull_rho"] = rat(v.hull_rho);
  j["weights"] = rho_mass_list(v.weights);
  j["weight_total"] = rat(v.weight_total);
  j["ghat_star"] = rat(v.ghat_star);
  j["min_green"] = rat(v.min_green);
  j["iterate_min"] = rat(v.iterate_min);
  j["iterate_rho"] = rat(v.iterate_rho);
  j["grid_identity_ok"] = v.grid_identity_ok;
  j["pole_drift_ok"] = v.pole_drift_ok;
  return j;
}

template <typename S>
Json lattes_result(const S& proto, const LattesArgs& a) {
  const berkres::LattesSpec<S> spec(a.m, proto, a.precision);
  const long D = a.denominator > 0 ? a.denominator : default_lattes_denominator(a.m);
  const berkres::LattesReport rep = berkres::lattes_report(spec, D);

  Json r;
  r["m"] = rep.m;
  r["degree"] = rep.degree;
  r["precision"] = rep.precision;
  r["recheck_precision"] = 2 * rep.precision;
  r["denominator"] = rep.denominator;
  r["verdict"] = berkres::to_string(rep.iteration_verdict);
  r["stable"] = rep.stable;
  r["conclusive"] = rep.conclusive;
  r["r_gauss"] = checked_json(rep.r_gauss, a.verify);
  r["minresloc_rho"] = checked_json(rep.minresloc_rho, a.verify);
  r["minresloc_value"] = checked_json(rep.minresloc_value, a.verify);
  r["weights"] = checked_weights_json(rep.weights, a.verify);
  r["ghat_at_star"] = checked_json(rep.ghat_at_star, a.verify);
  r["min_green"] = checked_json(rep.min_green, a.verify);
  r["iterate_min"] = checked_json(rep.iterate_min, a.verify);
  r["iterate_rho"] = checked_json(rep.iterate_rho, a.verify);
  r["unique_minimizer"] = rep.unique_minimizer;
  r["grid_identity_ok"] = rep.grid_identity_ok;
  r["pole_drift_ok"] = rep.pole_drift_ok;
  r["iterate_factor"] = rat(rep.iterate_factor);
  r["iteration_matches"] = rep.iteration_matches;
  if (a.verify) {
    r["iteration_predicted"] = rep.iteration_predicted;
    r["all_match"] = rep.all_match;
  }
  r["notes"] = rep.notes;
  if (!rep.stable) {
    Json runs;
    runs["primary"] = lattes_values_json(rep.run);
    runs["recheck"] = lattes_values_json(rep.recheck);
    r["runs"] = std::move(runs);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Argument bundles
// ---------------------------------------------------------------------------

struct MapArgs {
  std::string map_path;
  OutputOptions out;
  std::vector<std::string> segment;
  std::vector<std::string> at;
  long denominator = 12;
  long max_n = 3;
  long nmax = 6;
  bool ring_identity = false;
};

int fail(int code, const std::string& message) {
  std::cerr << "berkres: error: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace berkres;

  CLI::App app{"exact minimal-resultant analysis of rational maps over non-archimedean fields"};
  app.require_subcommand(1);
  int rc = 0;

  // analyze ------------------------------------------------------------------
  MapArgs analyze_args;
  CLI::App* cmd_analyze = app.add_subcommand(
      "analyze", "resultant valuation and reduction type at the Gauss point");
  cmd_analyze->add_option("map", analyze_args.map_path, "map file (JSON)")->required();
  add_output_options(cmd_analyze, analyze_args.out);
  cmd_analyze->callback([&]() {
    const tool::LoadedMap map = tool::load_map_file(analyze_args.map_path);
    Json rep = envelope("analyze", Json::object(), &map);
    std::visit([&](const auto& pair) { rep["result"] = analyze_result(pair); }, map.pair);
    rc = emit_report(rep, analyze_args.out);
  });

  // iterate-check --------------------------------------------------------------
  MapArgs iter_args;
  iter_args.max_n = 2;
  CLI::App* cmd_iter = app.add_subcommand(
      "iterate-check", "resultant valuation of iterates against the predicted multiples");
  cmd_iter->add_option("map", iter_args.map_path, "map file (JSON)")->required();
  cmd_iter->add_option("--max-n", iter_args.max_n, "check iterates n = 2..max-n (default 2)");
  cmd_iter->add_flag("--ring-identity", iter_args.ring_identity,
                     "also verify the exact resultant power identity by determinant (d^n <= 27)");
  add_output_options(cmd_iter, iter_args.out);
  cmd_iter->callback([&]() {
    if (iter_args.max_n < 2) throw parse_error("--max-n must be at least 2");
    const tool::LoadedMap map = tool::load_map_file(iter_args.map_path);
    Json params;
    params["max_n"] = iter_args.max_n;
    params["ring_identity"] = iter_args.ring_identity;
    Json rep = envelope("iterate-check", std::move(params), &map);
    std::visit(
        [&](const auto& pair) {
          rep["result"] = iterate_check_result(pair, iter_args.max_n, iter_args.ring_identity);
        },
        map.pair);
    rc = emit_report(rep, iter_args.out);
  });

  // ordres ---------------------------------------------------------------------
  MapArgs ordres_args;
  CLI::App* cmd_ordres = app.add_subcommand(
      "ordres", "resultant valuation at one point (--at) or along a segment (--segment)");
  cmd_ordres->add_option("map", ordres_args.map_path, "map file (JSON)")->required();
  cmd_ordres->add_option("--at", ordres_args.at, "point tokens: a=<scalar> rho=<rational>")
      ->expected(1, 2);
  cmd_ordres
      ->add_option("--segment", ordres_args.segment, "segment tokens: a=<scalar> lo=<rat> hi=<rat>")
      ->expected(1, 3);
  cmd_ordres->add_option("--denominator", ordres_args.denominator,
                         "grid denominator for --segment (default 12)");
  add_output_options(cmd_ordres, ordres_args.out);
  cmd_ordres->callback([&]() {
    if (ordres_args.at.empty() == ordres_args.segment.empty())
      throw parse_error("ordres needs exactly one of --at or --segment");
    const tool::LoadedMap map = tool::load_map_file(ordres_args.map_path);
    Json rep = envelope("ordres", Json::object(), &map);
    std::visit(
        [&](const auto& pair) {
          if (!ordres_args.at.empty()) {
            const auto pt = make_point(ordres_args.at, pair.proto());
            rep["parameters"]["point"] = pt.to_string();
            Json r;
            r["point"] = pt.to_string();
            r["rho"] = rat(pt.radius_exponent);
            r["value"] = rat(ord_res_at(pair, pt));
            rep["result"] = std::move(r);
          } else {
            const auto seg = make_segment(ordres_args.segment, ordres_args.denominator, pair.proto());
            rep["parameters"]["segment"] = segment_json(seg);
            Json r;
            r["segment"] = segment_json(seg);
            Json samples = Json::array();
            for (const Rat& rho : seg.grid()) {
              Json s;
              s["rho"] = rat(rho);
              s["value"] = rat(ord_res_at(pair, seg.point(rho)));
              samples.push_back(std::move(s));
            }
            r["samples"] = std::move(samples);
            rep["result"] = std::move(r);
          }
        },
        map.pair);
    rc = emit_report(rep, ordres_args.out);
  });

  // minresloc -------------------------------------------------------------------
  MapArgs minres_args;
  CLI::App* cmd_minres = app.add_subcommand(
      "minresloc", "minimize the resultant valuation on a segment grid");
  cmd_minres->add_option("map", minres_args.map_path, "map file (JSON)")->required();
  cmd_minres
      ->add_option("--segment", minres_args.segment, "segment tokens: a=<scalar> lo=<rat> hi=<rat>")
      ->expected(1, 3)
      ->required();
  cmd_minres->add_option("--denominator", minres_args.denominator,
                         "grid denominator (default 12)");
  add_output_options(cmd_minres, minres_args.out);
  cmd_minres->callback([&]() {
    const tool::LoadedMap map = tool::load_map_file(minres_args.map_path);
    Json rep = envelope("minresloc", Json::object(), &map);
    std::visit(
        [&](const auto& pair) {
          const auto seg = make_segment(minres_args.segment, minres_args.denominator, pair.proto());
          rep["parameters"]["segment"] = segment_json(seg);
          Json r;
          r["segment"] = segment_json(seg);
          const OrdResProfile prof = min_res_loc_on_segment(pair, seg);
          r.update(profile_json(prof));
          rep["result"] = std::move(r);
        },
        map.pair);
    rc = emit_report(rep, minres_args.out);
  });

  // weights ----------------------------------------------------------------------
  MapArgs weights_args;
  CLI::App* cmd_weights = app.add_subcommand(
      "weights", "slope-break masses of the resultant-valuation profile on a segment");
  cmd_weights->add_option("map", weights_args.map_path, "map file (JSON)")->required();
  cmd_weights
      ->add_option("--segment", weights_args.segment, "segment tokens: a=<scalar> lo=<rat> hi=<rat>")
      ->expected(1, 3)
      ->required();
  cmd_weights->add_option("--denominator", weights_args.denominator,
                          "grid denominator (default 12)");
  add_output_options(cmd_weights, weights_args.out);
  cmd_weights->callback([&]() {
    const tool::LoadedMap map = tool::load_map_file(weights_args.map_path);
    Json rep = envelope("weights", Json::object(), &map);
    std::visit(
        [&](const auto& pair) {
          const auto seg = make_segment(weights_args.segment, weights_args.denominator, pair.proto());
          rep["parameters"]["segment"] = segment_json(seg);
          rep["result"] = weights_result(pair, seg);
        },
        map.pair);
    rc = emit_report(rep, weights_args.out);
  });

  // measure ----------------------------------------------------------------------
  MapArgs measure_args;
  CLI::App* cmd_measure = app.add_subcommand(
      "measure", "truncated residue measure and the barycenter verdict");
  cmd_measure->add_option("map", measure_args.map_path, "map file (JSON)")->required();
  cmd_measure->add_option("--nmax", measure_args.nmax,
                          "preimage truncation depth (default 6)");
  cmd_measure
      ->add_option("--at", measure_args.at,
                   "type-II point tokens: a=<scalar> rho=<rational> (default: Gauss point)")
      ->expected(1, 2);
  add_output_options(cmd_measure, measure_args.out);
  cmd_measure->callback([&]() {
    const tool::LoadedMap map = tool::load_map_file(measure_args.map_path);
    Json rep = envelope("measure", Json::object(), &map);
    std::visit(
        [&](const auto& pair) {
          const auto pt = make_point(measure_args.at, pair.proto());
          rep["parameters"]["point"] = pt.to_string();
          rep["parameters"]["truncation_depth"] = measure_args.nmax;
          rep["result"] = measure_result(pair, pt, measure_args.nmax);
        },
        map.pair);
    rc = emit_report(rep, measure_args.out);
  });

  // theorem-check -------------------------------------------------------------------
  MapArgs theorem_args;
  CLI::App* cmd_theorem = app.add_subcommand(
      "theorem-check", "iteration-formula criterion at a decisive point of the search domain");
  cmd_theorem->add_option("map", theorem_args.map_path, "map file (JSON)")->required();
  cmd_theorem->add_option("--max-n", theorem_args.max_n, "check iterates up to this n (default 3)");
  cmd_theorem
      ->add_option("--segment", theorem_args.segment,
                   "search segment tokens: a=<scalar> lo=<rat> hi=<rat> (default: Gauss point only)")
      ->expected(1, 3);
  cmd_theorem->add_option("--denominator", theorem_args.denominator,
                          "grid denominator for --segment (default 12)");
  add_output_options(cmd_theorem, theorem_args.out);
  cmd_theorem->callback([&]() {
    if (theorem_args.max_n < 1) throw parse_error("--max-n must be at least 1");
    const tool::LoadedMap map = tool::load_map_file(theorem_args.map_path);
    Json params;
    params["max_n"] = theorem_args.max_n;
    params["domain"] = theorem_args.segment.empty() ? "gauss" : "segment";
    Json rep = envelope("theorem-check", std::move(params), &map);
    std::visit(
        [&](const auto& pair) {
          if (theorem_args.segment.empty()) {
            rep["result"] = theorem_result(main_theorem_check(pair, theorem_args.max_n));
          } else {
            const auto seg =
                make_segment(theorem_args.segment, theorem_args.denominator, pair.proto());
            rep["parameters"]["segment"] = segment_json(seg);
            rep["result"] = theorem_result(main_theorem_check(pair, theorem_args.max_n, seg));
          }
        },
        map.pair);
    rc = emit_report(rep, theorem_args.out);
  });

  // lattes -----------------------------------------------------------------------
  LattesArgs lattes_args;
  CLI::App* cmd_lattes = app.add_subcommand(
      "lattes", "multiplication-by-m analysis on the Tate curve family");
  cmd_lattes->add_option("--m", lattes_args.m, "multiplication index (>= 2)")->required();
  cmd_lattes->add_option("--precision", lattes_args.precision,
                         "series truncation order (default: 16 for m <= 3, 24 for larger m)");
  cmd_lattes->add_option("--denominator", lattes_args.denominator,
                         "segment grid denominator (default: smallest grid holding every breakpoint)");
  cmd_lattes->add_flag("--verify", lattes_args.verify,
                       "compare every value against its closed form");
  cmd_lattes->add_option("--residue", lattes_args.residue, "residue field: Q or Fp (default Q)")
      ->check(CLI::IsMember({"Q", "Fp"}));
  cmd_lattes->add_option("--p", lattes_args.p, "prime for the Fp residue field (>= 5)");
  add_output_options(cmd_lattes, lattes_args.out);
  cmd_lattes->callback([&]() {
    Json params;
    params["m"] = lattes_args.m;
    params["precision"] = lattes_args.precision;
    params["denominator"] = lattes_args.denominator;
    params["verify"] = lattes_args.verify;
    params["residue"] = lattes_args.residue;
    if (lattes_args.residue == "Fp") {
      if (lattes_args.p == 0) throw parse_error("--residue Fp needs --p <prime>");
      params["p"] = lattes_args.p;
    }
    Json rep = envelope("lattes", std::move(params), nullptr);
    if (lattes_args.residue == "Fp") {
      rep["result"] = lattes_result(Puiseux<Fp>(Fp(0, lattes_args.p), 1), lattes_args);
    } else {
      rep["result"] = lattes_result(Puiseux<Rat>(Rat(0), 1), lattes_args);
    }
    rc = emit_report(rep, lattes_args.out);
  });

  // ---------------------------------------------------------------------------
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const refine_grid_error& e) {
    return fail(4, e.what());
  } catch (const precision_error& e) {
    return fail(4, e.what());
  } catch (const unsupported_parameter& e) {
    return fail(4, e.what());
  } catch (const inconclusive_domain_error& e) {
    return fail(3, e.what());
  } catch (const parse_error& e) {
    return fail(1, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(1, e.what());
  } catch (const std::domain_error& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return rc;
}
