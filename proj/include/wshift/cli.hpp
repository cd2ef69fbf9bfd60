#ifndef WSHIFT_CLI_HPP
#define WSHIFT_CLI_HPP

// Command-line front end. run() is the whole program; the executable only
// forwards argv. Exit codes: 0 success or PASS, 1 mathematical FAIL or
// refusal, 2 usage or IO error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wshift/errors.hpp"
#include "wshift/json_io.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/measures.hpp"
#include "wshift/oracle.hpp"
#include "wshift/oracle_report.hpp"
#include "wshift/positivity.hpp"
#include "wshift/spectra.hpp"
#include "wshift/weights1d.hpp"

namespace wshift::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Family parameters shared by every verb that builds a diagram.
struct FamilyOptions {
  std::string family;
  double kappa = 2.0;
  double y0 = 0.5;
  double alpha = 0.5;
  double beta = 0.8;
  double a = 0.5;
  std::string ells = "4,3,2";
  double c = 1.0;
  double r = 0.5;
  std::string row0, row1, col0, rows;  // JSON shifts for thm-compactper / adhoc
  std::string diagram;                 // full diagram JSON, overrides the rest

  void attach(CLI::App* app, bool family_required = true) {
    auto* f = app->add_option("--family", family, "weight diagram family (see `families list`)");
    if (family_required && diagram.empty()) f->required(false);
    app->add_option("--kappa", kappa, "two-atom parameter (thm-khypo)");
    app->add_option("--y0", y0, "first column weight (thm-khypo)");
    app->add_option("--alpha", alpha, "exof1atom alpha");
    app->add_option("--beta", beta, "exof1atom beta");
    app->add_option("--a", a, "stair weight");
    app->add_option("--ells", ells, "comma-separated Bergman-like indices (thm-important)");
    app->add_option("--c", c, "column cap / norm of W_beta (thm-important)");
    app->add_option("--r", r, "column geometric ratio (thm-important)");
    app->add_option("--row0", row0, "row 0 shift as JSON (thm-compactper)");
    app->add_option("--row1", row1, "common row j >= 1 as JSON (thm-compactper)");
    app->add_option("--col0", col0, "column 0 shift as JSON (thm-compactper, adhoc)");
    app->add_option("--rows", rows, "JSON array of row shifts (adhoc)");
    app->add_option("--diagram", diagram, "full diagram JSON or @file");
  }

  std::vector<int> ell_list() const {
    std::vector<int> out;
    std::stringstream ss(ells);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(std::stoi(item));
    if (out.empty()) throw DomainError("--ells must list at least one index");
    return out;
  }
};

namespace detail {

/// "@path" reads the file, anything else is the literal text.
inline std::string read_arg(const std::string& v) {
  if (v.empty() || v[0] != '@') return v;
  std::ifstream in(v.substr(1));
  if (!in) throw CLI::ValidationError("cannot read " + v.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_arg(const std::string& v, const std::string& what) {
  try {
    return json::parse(read_arg(v));
  } catch (const json::parse_error& e) {
    throw CLI::ValidationError(what + ": " + e.what());
  }
}

inline WeightDiagram2D build_diagram(const FamilyOptions& o) {
  if (!o.diagram.empty()) return json_io::diagram_from_json(parse_json_arg(o.diagram, "--diagram"));
  if (o.family.empty()) throw CLI::ValidationError("--family or --diagram is required");
  const Family f = json_io::family_from_name(o.family);
  auto shift_arg = [](const std::string& v, const char* name) {
    if (v.empty()) throw CLI::ValidationError(std::string(name) + " is required for this family");
    return json_io::shift_from_json(parse_json_arg(v, name));
  };
  switch (f) {
    case Family::ThmCompactPer:
      return make_thm_compactper(shift_arg(o.row0, "--row0"), shift_arg(o.row1, "--row1"), shift_arg(o.col0, "--col0"));
    case Family::ExampleBergman: return make_example_bergman();
    case Family::ExOf1Atom: return make_example_exof1atom(o.alpha, o.beta);
    case Family::ThmImportant: return make_thm_important(o.ell_list(), geometric_cap_column(o.c, o.r));
    case Family::Stair: return make_example_stair(o.a);
    case Family::ThmKhypo: return make_thm_khypo(o.kappa, o.y0);
    case Family::AdHoc: {
      const json rows = parse_json_arg(o.rows.empty() ? "" : o.rows, "--rows");
      std::vector<UnilateralShift> rs;
      for (const auto& r : rows) rs.push_back(json_io::shift_from_json(r));
      return make_adhoc(std::move(rs), shift_arg(o.col0, "--col0"));
    }
  }
  throw CLI::ValidationError("unhandled family");
}

inline std::string fmt6(double v) { return wshift::detail::fmt6(v); }

/// Weight table in the layout of the figures: top row first, row 0 last.
inline std::string text_table(const WeightDiagram2D& d, std::size_t m) {
  std::string s = d.family_name() + "\n";
  auto block = [&](const char* name, auto get) {
    s += name;
    s += " (rows top to bottom, j = " + std::to_string(m) + " .. 0)\n";
    for (std::size_t jj = m + 1; jj-- > 0;) {
      s += "j=" + std::to_string(jj) + ":";
      for (std::size_t i = 0; i <= m; ++i) s += " " + fmt6(get(i, jj));
      s += "\n";
    }
  };
  block("alpha", [&](std::size_t i, std::size_t j) { return d.alpha(i, j); });
  block("beta", [&](std::size_t i, std::size_t j) { return d.beta(i, j); });
  return s;
}

inline std::string radial_text(const RadialSet& r) {
  switch (r.kind) {
    case RadialSet::Kind::Interval: return "[" + fmt6(r.a) + "," + fmt6(r.b) + "]";
    case RadialSet::Kind::Point: return "{" + fmt6(r.a) + "}";
    case RadialSet::Kind::Geometric: return "{" + fmt6(r.a) + "*" + fmt6(r.b) + "^k}u{0}";
  }
  return "";
}

inline std::string picture_text(const SpectralPicture& p) {
  std::string s = p.label() + ":";
  const SpectralPicture nf = p.normal_form();
  bool first = true;
  for (const auto& q : nf.primitives()) {
    s += (first ? " " : " u ") + radial_text(q.z1) + " x " + radial_text(q.z2);
    first = false;
  }
  return s + "\n";
}

/// Closed-form pictures available for the diagram's family.
inline PictureBundle pictures_for(const WeightDiagram2D& d, const FamilyOptions& o) {
  switch (d.family()) {
    case Family::ThmKhypo: return picture_thm_khypo(std::get<ThmKhypoParams>(d.params()).kappa);
    case Family::ThmImportant: {
      const auto& p = std::get<ThmImportantParams>(d.params());
      return picture_thm_important(p.ells, norm(p.col));
    }
    case Family::ExOf1Atom: {
      const auto& p = std::get<ExOf1AtomParams>(d.params());
      return picture_example_exof1atom(p.alpha, p.beta);
    }
    case Family::ExampleBergman:
    case Family::ThmCompactPer: return picture_thm_compactper(d);
    default:
      (void)o;
      throw HypothesisError("no closed-form spectral picture for family " + d.family_name());
  }
}

inline json components_json(const SpectralPicture& p) {
  const std::size_t n = component_count(p);
  return n == kInfiniteComponents ? json("infinite") : json(n);
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CLI::ValidationError("cannot write " + path.string());
  out << body;
  if (!out) throw CLI::ValidationError("write failed for " + path.string());
}

/// Adds "--key value" for every config entry whose flag was not given.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw CLI::ValidationError("--config needs a file");
  const json cfg = parse_json_arg("@" + *(it + 1), "--config");
  if (!cfg.is_object()) throw CLI::ValidationError("--config file must hold a JSON object");
  args.erase(it, it + 2);
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted shift toolkit: moments, positivity checks and spectral pictures", "wshift"};
  app.require_subcommand(1);

  // families
  auto* families = app.add_subcommand("families", "list the known weight diagram families");
  auto* families_list = families->add_subcommand("list", "print family names");
  families->require_subcommand(1);
  std::string families_emit = "text";
  families_list->add_option("--emit", families_emit)->check(CLI::IsMember({"text", "json"}));

  // diagram show
  auto* diagram = app.add_subcommand("diagram", "weight diagrams");
  diagram->require_subcommand(1);
  auto* diagram_show = diagram->add_subcommand("show", "print a weight diagram");
  FamilyOptions dopt;
  dopt.attach(diagram_show);
  std::size_t diagram_region = 4;
  std::string diagram_emit = "text";
  bool diagram_region_given = false;
  diagram_show->add_option("--region", diagram_region, "print weights for 0 <= i, j <= M")
      ->each([&](const std::string&) { diagram_region_given = true; });
  diagram_show->add_option("--emit", diagram_emit)->check(CLI::IsMember({"text", "json"}));

  // check
  auto* check = app.add_subcommand("check", "positivity and necessary-condition checks");
  std::string check_kind;
  check->add_option("kind", check_kind, "hypo | khypo | subnec")->required()->check(CLI::IsMember({"hypo", "khypo", "subnec"}));
  FamilyOptions copt;
  copt.attach(check);
  std::size_t check_region = 10;
  std::size_t check_k = 1;
  double check_tol = kPsdTol;
  std::string check_emit = "json";
  check->add_option("--region", check_region, "scan 0 <= m1, m2 <= M")->required();
  check->add_option("--k", check_k, "order for khypo")->check(CLI::PositiveNumber);
  check->add_option("--tol", check_tol, "PSD tolerance relative to max(1, trace)");
  check->add_option("--emit", check_emit)->check(CLI::IsMember({"text", "json"}));

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "closed-form spectral pictures");
  FamilyOptions sopt;
  sopt.attach(spectrum);
  std::string spectrum_emit = "json";
  spectrum->add_option("--emit", spectrum_emit)->check(CLI::IsMember({"json", "svg", "text"}));

  // moments
  auto* moments_cmd = app.add_subcommand("moments", "lattice or measure moments");
  FamilyOptions mopt;
  mopt.attach(moments_cmd);
  std::size_t m1 = 0, m2 = 0, n_max = 10;
  std::string measure_arg;
  std::string moments_emit = "json";
  moments_cmd->add_option("--m1", m1);
  moments_cmd->add_option("--m2", m2);
  moments_cmd->add_option("--measure", measure_arg, "measure JSON or @file");
  moments_cmd->add_option("--n", n_max, "largest power for 1-variable measures");
  moments_cmd->add_option("--emit", moments_emit)->check(CLI::IsMember({"json", "csv", "text"}));

  // oracle compare
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force cross-checks");
  oracle_cmd->require_subcommand(1);
  auto* oracle_compare = oracle_cmd->add_subcommand("compare", "run an oracle comparison suite");
  std::string suite = "all";
  oracle_compare->add_option("--suite", suite)->check(CLI::IsMember(oracle::suite_names()));

  // figures
  auto* figures = app.add_subcommand("figures", "write figure SVGs and weight tables");
  std::string out_dir;
  figures->add_option("--out", out_dir, "output directory")->required();

  try {
    std::vector<std::string> args = detail::merge_config(argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (families_list->parsed()) {
      if (families_emit == "json") {
        json arr = json::array();
        for (Family f : all_families()) arr.push_back(family_name(f));
        out << arr.dump() << "\n";
      } else {
        for (Family f : all_families()) out << family_name(f) << "\n";
      }
      return kExitOk;
    }

    if (diagram_show->parsed()) {
      const auto d = detail::build_diagram(dopt);
      if (diagram_emit == "json") {
        json j = json_io::to_json(d);
        if (diagram_region_given) j["tables"] = json_io::weight_tables(d, diagram_region, diagram_region);
        out << j.dump() << "\n";
      } else {
        out << detail::text_table(d, diagram_region);
      }
      return kExitOk;
    }

    if (check->parsed()) {
      const auto d = detail::build_diagram(copt);
      if (check_kind == "subnec") {
        const auto v = slice_norm_necessary_check(d, std::max<std::size_t>(2, check_region));
        json j = {{"status", v.pass ? "PASS" : "FAIL"}, {"J", std::max<std::size_t>(2, check_region)}};
        json rows = json::array(), cols = json::array();
        for (double x : v.row_norms) rows.push_back(json_io::num6(x));
        for (double x : v.column_norms) cols.push_back(json_io::num6(x));
        j["row_norms"] = rows;
        j["column_norms"] = cols;
        if (v.failure) j["failure"] = *v.failure + "; the pair is not subnormal";
        if (check_emit == "json")
          out << j.dump() << "\n";
        else
          out << (v.pass ? "PASS" : "FAIL: " + *v.failure + "; the pair is not subnormal") << "\n";
        return v.pass ? kExitOk : kExitFail;
      }
      const std::size_t k = check_kind == "hypo" ? 1 : check_k;
      const auto v = is_k_hyponormal(d, k, {check_region, check_region}, check_tol);
      if (check_emit == "json") {
        out << json_io::to_json(v).dump() << "\n";
      } else {
        out << (v.pass() ? "PASS_ON_REGION" : "FAIL");
        if (v.witness)
          out << " at m=(" << v.witness->m.m1 << "," << v.witness->m.m2
              << ") lambda_min=" << detail::fmt6(v.witness->lambda_min);
        out << "\n";
      }
      return v.pass() ? kExitOk : kExitFail;
    }

    if (spectrum->parsed()) {
      const auto d = detail::build_diagram(sopt);
      const auto bundle = detail::pictures_for(d, sopt);
      if (spectrum_emit == "json") {
        json pics = json::array();
        json comps = json::object();
        for (const auto& p : bundle.pictures) {
          pics.push_back(json_io::to_json(p));
          comps[p.label()] = detail::components_json(p);
        }
        out << json{{"family", d.family_name()}, {"pictures", pics}, {"components", comps}}.dump() << "\n";
      } else if (spectrum_emit == "svg") {
        out << render_svg({bundle.taylor(), bundle.essential()});
      } else {
        for (const auto& p : bundle.pictures) out << detail::picture_text(p);
      }
      return kExitOk;
    }

    if (moments_cmd->parsed()) {
      if (!measure_arg.empty()) {
        const auto mu = json_io::measure_from_json(detail::parse_json_arg(measure_arg, "--measure"));
        if (const auto* m2d = std::get_if<AtomicMeasure2D>(&mu)) {
          const double v = measure_moment(*m2d, m1, m2);
          out << json{{"m", {m1, m2}}, {"moment", json_io::num6(v)}}.dump() << "\n";
          return kExitOk;
        }
        json vals = json::array();
        for (std::size_t n = 0; n <= n_max; ++n) {
          const double v = std::visit(
              [n](const auto& m) -> double {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, AtomicMeasure2D>)
                  return 0.0;
                else
                  return measure_moment(m, n);
              },
              mu);
          vals.push_back(json_io::num6(v));
        }
        if (moments_emit == "csv") {
          out << "n,moment\n";
          for (std::size_t n = 0; n <= n_max; ++n) out << n << "," << vals[n].dump() << "\n";
        } else {
          out << json{{"moments", vals}}.dump() << "\n";
        }
        return kExitOk;
      }
      const auto d = detail::build_diagram(mopt);
      const double g = gamma2d(d, {m1, m2});
      const double gb = oracle::gamma_bruteforce(d, {m1, m2});
      if (moments_emit == "json")
        out << json{{"family", d.family_name()}, {"m", {m1, m2}}, {"gamma", json_io::num6(g)},
                    {"gamma_bruteforce", json_io::num6(gb)}}
                   .dump()
            << "\n";
      else
        out << detail::fmt6(g) << "\n";
      return kExitOk;
    }

    if (oracle_compare->parsed()) {
      const auto checks = oracle::run_suite(suite);
      bool all = true;
      json arr = json::array();
      for (const auto& c : checks) {
        all = all && c.pass;
        json e = {{"name", c.name}, {"pass", c.pass}, {"max_error", c.max_error}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        arr.push_back(e);
      }
      out << json{{"suite", suite}, {"pass", all}, {"checks", arr}}.dump(2) << "\n";
      return all ? kExitOk : kExitFail;
    }

    if (figures->parsed()) {
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      if (ec) throw CLI::ValidationError("cannot create " + out_dir + ": " + ec.message());
      const fs::path dir(out_dir);
      const auto bergman = picture_thm_compactper(make_example_bergman());
      const auto important = picture_thm_important({4, 3, 2}, 1.0);
      const auto exof = picture_example_exof1atom(0.5, 0.8);
      const auto khypo = picture_thm_khypo(2.0);
      detail::write_file(dir / "fig2_example_bergman.svg", render_svg({bergman.taylor(), bergman.essential()}));
      detail::write_file(dir / "fig2_thm_important.svg", render_svg({important.taylor(), important.essential()}));
      detail::write_file(dir / "fig2_exof1atom.svg", render_svg({exof.taylor(), exof.essential()}));
      detail::write_file(dir / "fig2_thm_khypo.svg", render_svg({khypo.taylor(), khypo.essential()}));
      const auto samples = oracle::sample_diagrams();
      detail::write_file(dir / "fig1_thm_compactper.txt", detail::text_table(samples[0], 4));
      detail::write_file(dir / "fig1_example_bergman.txt", detail::text_table(make_example_bergman(), 4));
      detail::write_file(dir / "fig1_exof1atom.txt", detail::text_table(make_example_exof1atom(0.5, 0.8), 4));
      detail::write_file(dir / "fig2_stair.txt", detail::text_table(make_example_stair(0.5), 4));
      detail::write_file(dir / "fig2_thm_khypo.txt", detail::text_table(make_thm_khypo(2.0, std::sqrt(0.5)), 4));
      for (const char* name : {"fig2_example_bergman.svg", "fig2_thm_important.svg", "fig2_exof1atom.svg",
                               "fig2_thm_khypo.svg", "fig1_thm_compactper.txt", "fig1_example_bergman.txt",
                               "fig1_exof1atom.txt", "fig2_stair.txt", "fig2_thm_khypo.txt"})
        out << (dir / name).string() << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HypothesisError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitFail;
  } catch (const NegativeMassError& e) {
    err << "NEGATIVE_MASS: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace wshift::cli

#endif  // WSHIFT_CLI_HPP
