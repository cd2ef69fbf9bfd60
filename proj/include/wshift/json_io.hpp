#ifndef WSHIFT_JSON_IO_HPP
#define WSHIFT_JSON_IO_HPP

// JSON encoding for sequences, diagrams, measures, verdicts and pictures.
// Objects use sorted keys. Computed quantities are rounded to 6 decimals;
// parameters that define an object keep full precision so loading
// reproduces it exactly.

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wshift/errors.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/measures.hpp"
#include "wshift/positivity.hpp"
#include "wshift/spectra.hpp"
#include "wshift/weights1d.hpp"

namespace wshift::json_io {

using json = nlohmann::json;

/// Rounded to 6 decimals; integral values become JSON integers.
inline json num6(double v) {
  if (!std::isfinite(v)) return v > 0 ? json("inf") : (v < 0 ? json("-inf") : json("nan"));
  const double r = std::round(v * 1e6) / 1e6;
  if (r == std::floor(r) && std::abs(r) < 9e15) return json(static_cast<long long>(r));
  return json(r);
}

namespace detail {

inline double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("expected number field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace detail

// --- weight sequences -------------------------------------------------------

json to_json(const WeightSequence& w);

inline json tail_to_json(const TailRule& t) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          return {{"kind", "constant"}, {"value", r.value}};
        } else if constexpr (std::is_same_v<T, BergmanLikeTail>) {
          return {{"kind", "bergman_like"}, {"ell", r.ell}, {"offset", r.offset}};
        } else if constexpr (std::is_same_v<T, TwoAtomTail>) {
          return {{"kind", "two_atom"}, {"kappa", r.kappa}};
        } else if constexpr (std::is_same_v<T, GeometricCapTail>) {
          return {{"kind", "geometric_cap"}, {"cap", r.cap}, {"ratio", r.ratio}};
        } else if constexpr (std::is_same_v<T, MomentRatioTail>) {
          json atoms = json::array();
          for (const auto& [loc, mass] : r.atoms) atoms.push_back(json::object({{"s", loc}, {"mass", mass}}));
          return {{"kind", "moment_ratio"}, {"atoms", atoms}};
        } else {
          return {{"kind", "sequence"}, {"source", to_json(*r.source)}};
        }
      },
      t);
}

inline json to_json(const WeightSequence& w) {
  return {{"head", w.head()}, {"tail", tail_to_json(w.tail())}, {"sup", w.declared_sup()}};
}

WeightSequence weight_sequence_from_json(const json& j);

inline TailRule tail_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "constant") return ConstantTail{detail::get_number(j, "value")};
  if (kind == "bergman_like") return BergmanLikeTail{j.at("ell").get<int>(), j.value("offset", 0)};
  if (kind == "two_atom") return TwoAtomTail{detail::get_number(j, "kappa")};
  if (kind == "geometric_cap") return GeometricCapTail{detail::get_number(j, "cap"), detail::get_number(j, "ratio")};
  if (kind == "moment_ratio") {
    MomentRatioTail t;
    for (const auto& a : j.at("atoms")) t.atoms.emplace_back(detail::get_number(a, "s"), detail::get_number(a, "mass"));
    return t;
  }
  if (kind == "sequence")
    return SequenceTail{std::make_shared<const WeightSequence>(weight_sequence_from_json(j.at("source")))};
  throw DomainError("unknown tail kind '" + kind + "'");
}

inline WeightSequence weight_sequence_from_json(const json& j) {
  std::vector<double> head = j.value("head", std::vector<double>{});
  TailRule tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailRule{ConstantTail{1.0}};
  if (j.contains("sup")) return WeightSequence(std::move(head), std::move(tail), detail::get_number(j, "sup"));
  return WeightSequence(std::move(head), std::move(tail));
}

inline json to_json(const UnilateralShift& s) { return {{"label", s.label}, {"weights", to_json(s.weights)}}; }

/// Accepts {"label", "weights": seq} or a bare sequence object.
inline UnilateralShift shift_from_json(const json& j) {
  if (j.contains("weights")) return {weight_sequence_from_json(j.at("weights")), j.value("label", "shift")};
  return {weight_sequence_from_json(j), "shift"};
}

// --- diagrams ---------------------------------------------------------------

inline json params_to_json(const WeightDiagram2D& d) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, CompactPerParams>) {
          return {{"row0", to_json(p.row0)}, {"row1", to_json(p.row1)}, {"col0", to_json(p.col0)}};
        } else if constexpr (std::is_same_v<P, ExampleBergmanParams>) {
          return json::object();
        } else if constexpr (std::is_same_v<P, ExOf1AtomParams>) {
          return {{"alpha", p.alpha}, {"beta", p.beta}};
        } else if constexpr (std::is_same_v<P, ThmImportantParams>) {
          return {{"ells", p.ells}, {"col", to_json(p.col)}, {"strict", p.strict}};
        } else if constexpr (std::is_same_v<P, StairParams>) {
          return {{"a", p.a}};
        } else if constexpr (std::is_same_v<P, ThmKhypoParams>) {
          return {{"kappa", p.kappa}, {"y0", p.y0}};
        } else {
          json rows = json::array();
          for (const auto& r : p.rows) rows.push_back(to_json(r));
          return {{"rows", rows}, {"col0", to_json(p.col0)}};
        }
      },
      d.params());
}

/// alpha and beta on [0, m1] x [0, m2]; tables are indexed [j][i] with row
/// j = 0 first.
inline json weight_tables(const WeightDiagram2D& d, std::size_t m1, std::size_t m2) {
  json alpha = json::array(), beta = json::array();
  for (std::size_t j = 0; j <= m2; ++j) {
    json ar = json::array(), br = json::array();
    for (std::size_t i = 0; i <= m1; ++i) {
      ar.push_back(num6(d.alpha(i, j)));
      br.push_back(num6(d.beta(i, j)));
    }
    alpha.push_back(ar);
    beta.push_back(br);
  }
  return {{"alpha", alpha}, {"beta", beta}};
}

inline json to_json(const WeightDiagram2D& d) { return {{"family", d.family_name()}, {"params", params_to_json(d)}}; }

inline Family family_from_name(const std::string& name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  throw DomainError("unknown family '" + name + "'");
}

inline WeightDiagram2D diagram_from_json(const json& j) {
  const Family f = family_from_name(j.at("family").get<std::string>());
  const json p = j.value("params", json::object());
  switch (f) {
    case Family::ThmCompactPer:
      return make_thm_compactper(shift_from_json(p.at("row0")), shift_from_json(p.at("row1")),
                                 shift_from_json(p.at("col0")));
    case Family::ExampleBergman: return make_example_bergman();
    case Family::ExOf1Atom: return make_example_exof1atom(detail::get_number(p, "alpha"), detail::get_number(p, "beta"));
    case Family::ThmImportant:
      return make_thm_important(p.at("ells").get<std::vector<int>>(), shift_from_json(p.at("col")),
                                p.value("strict", true) ? ColumnCheck::Strict : ColumnCheck::Relaxed);
    case Family::Stair: return make_example_stair(detail::get_number(p, "a"));
    case Family::ThmKhypo: return make_thm_khypo(detail::get_number(p, "kappa"), detail::get_number(p, "y0"));
    case Family::AdHoc: {
      std::vector<UnilateralShift> rows;
      for (const auto& r : p.at("rows")) rows.push_back(shift_from_json(r));
      return make_adhoc(std::move(rows), shift_from_json(p.at("col0")));
    }
  }
  throw DomainError("unhandled family");
}

// --- measures ---------------------------------------------------------------

using AnyMeasure = std::variant<AtomicMeasure1D, AtomicMeasure2D, DensityMeasure1D>;

inline json to_json(const AtomicMeasure1D& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back(json::object({{"s", a.location}, {"mass", a.mass}}));
  return {{"atoms", atoms}};
}

inline json to_json(const AtomicMeasure2D& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back(json::object({{"s", a.s}, {"t", a.t}, {"mass", a.mass}}));
  return {{"atoms", atoms}};
}

inline json to_json(const DensityMeasure1D& mu) { return {{"density", mu.name()}}; }

/// Atoms with a "t" field make a 2-variable measure.
inline AnyMeasure measure_from_json(const json& j) {
  if (j.contains("density")) {
    const std::string name = j.at("density").get<std::string>();
    if (name == "bergman1") return DensityMeasure1D{DensityFamily::Bergman1};
    if (name == "bergman2") return DensityMeasure1D{DensityFamily::Bergman2};
    throw DomainError("unknown density '" + name + "'");
  }
  if (!j.contains("atoms") || !j.at("atoms").is_array()) throw DomainError("measure needs \"atoms\" or \"density\"");
  bool two = false;
  for (const auto& a : j.at("atoms")) two = two || a.contains("t");
  if (two) {
    std::vector<Atom2D> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({detail::get_number(a, "s"), a.value("t", 0.0), detail::get_number(a, "mass")});
    return AtomicMeasure2D(std::move(atoms));
  }
  std::vector<Atom1D> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back({detail::get_number(a, "s"), detail::get_number(a, "mass")});
  return AtomicMeasure1D(std::move(atoms));
}

// --- verdicts ---------------------------------------------------------------

inline json to_json(const PositivityVerdict& v) {
  json out = {{"status", v.pass() ? "PASS_ON_REGION" : "FAIL"},
              {"region", {v.region.m1_max, v.region.m2_max}},
              {"tol", v.tol},
              {"k", v.order}};
  if (v.witness)
    out["witness"] = {{"m", {v.witness->m.m1, v.witness->m.m2}}, {"lambda_min", num6(v.witness->lambda_min)}};
  if (v.tail_certificate) out["tail_certificate"] = *v.tail_certificate;
  return out;
}

// --- pictures ---------------------------------------------------------------

inline json to_json(const RadialSet& s) {
  switch (s.kind) {
    case RadialSet::Kind::Interval: return {{"kind", "interval"}, {"lo", num6(s.a)}, {"hi", num6(s.b)}};
    case RadialSet::Kind::Point: return {{"kind", "point"}, {"r", num6(s.a)}};
    case RadialSet::Kind::Geometric: return {{"kind", "geometric"}, {"r0", num6(s.a)}, {"q", num6(s.b)}};
  }
  return {};
}

inline RadialSet radial_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "interval") return RadialSet::interval(detail::get_number(j, "lo"), detail::get_number(j, "hi"));
  if (kind == "point") return RadialSet::point(detail::get_number(j, "r"));
  if (kind == "geometric") return RadialSet::geometric(detail::get_number(j, "r0"), detail::get_number(j, "q"));
  throw DomainError("unknown radial set kind '" + kind + "'");
}

inline json to_json(const SpectralPicture& p) {
  json prims = json::array();
  const SpectralPicture nf = p.normal_form();
  for (const auto& q : nf.primitives()) prims.push_back(json::object({{"z1", to_json(q.z1)}, {"z2", to_json(q.z2)}}));
  return {{"label", p.label()}, {"primitives", prims}};
}

inline SpectralPicture picture_from_json(const json& j) {
  std::vector<Primitive> prims;
  for (const auto& q : j.at("primitives")) prims.push_back({radial_from_json(q.at("z1")), radial_from_json(q.at("z2"))});
  return SpectralPicture(j.at("label").get<std::string>(), std::move(prims));
}

}  // namespace wshift::json_io

#endif  // WSHIFT_JSON_IO_HPP
