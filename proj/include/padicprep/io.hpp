#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "padicprep/characters.hpp"
#include "padicprep/frobenius.hpp"
#include "padicprep/homology.hpp"
#include "padicprep/ideal.hpp"
#include "padicprep/linearize.hpp"
#include "padicprep/series.hpp"
#include "padicprep/weierstrass.hpp"

namespace padicprep::io {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorCode::InvalidInput, std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad JSON field \"") + key + "\": " + e.what());
  }
}

inline Coords parse_coords(const std::string& s) {
  if (s == "t") return Coords::T;
  if (s == "x") return Coords::X;
  fail(ErrorCode::InvalidInput, "coords must be \"t\" or \"x\", got \"" + s + "\"");
}

}  // namespace detail

inline Json to_json(const CoefficientContext& ctx) {
  return {{"prime", ctx.prime()}, {"precision", ctx.precision()}, {"degree", ctx.degree()}};
}

inline CoefficientContext context_from_json(const Json& j) {
  return CoefficientContext(detail::get<std::uint64_t>(j, "prime"), detail::get<int>(j, "precision"),
                            detail::get<int>(j, "degree"));
}

inline Json to_json(const PadicScalar& s) {
  if (s.is_zero()) return {{"v", "inf"}, {"u", "0"}, {"loss", 0}};
  return {{"v", s.valuation()}, {"u", std::to_string(s.unit())}, {"loss", s.loss()}};
}

// Scalar JSON, or a rational given as a string ("-3/4") or an integer.
inline PadicScalar scalar_from_json(const CoefficientContext& ctx, const Json& j) {
  if (j.is_string()) return PadicScalar::parse_rational(ctx, j.get<std::string>());
  if (j.is_number_integer()) return PadicScalar::from_int(ctx, j.get<long long>());
  const Json& v = detail::field(j, "v");
  std::string u = detail::get<std::string>(j, "u");
  if (v.is_string()) {
    require(v.get<std::string>() == "inf" && u == "0", ErrorCode::InvalidInput, "malformed zero scalar");
    return PadicScalar::zero(ctx);
  }
  std::uint64_t digits = 0;
  try {
    std::size_t used = 0;
    digits = std::stoull(u, &used);
    require(used == u.size(), ErrorCode::InvalidInput, "unit digits must be decimal: " + u);
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidInput, "unit digits must be decimal: " + u);
  }
  return PadicScalar::from_parts(ctx, v.get<std::int64_t>(), digits, detail::get<int>(j, "loss"));
}

// Terms in graded-lex ascending order (the map order of MultiSeries).
inline Json to_json(const MultiSeries& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json e = Json::array();
    for (std::size_t i = 0; i < f.nvars(); ++i) e.push_back(m[i]);
    terms.push_back({{"exp", e}, {"coeff", to_json(c)}});
  }
  return {{"coords", std::string(coords_name(f.coords()))}, {"nvars", f.nvars()}, {"terms", terms}};
}

// Series JSON; "poly" (a rational polynomial string) may replace "terms".
inline MultiSeries series_from_json(const CoefficientContext& ctx, const Json& j) {
  Coords coords = detail::parse_coords(detail::get<std::string>(j, "coords"));
  auto nvars = detail::get<std::size_t>(j, "nvars");
  require(nvars >= 1 && nvars <= Monomial::kMaxVars, ErrorCode::InvalidInput, "nvars must be between 1 and 7");
  if (j.contains("poly")) return MultiSeries::parse(ctx, nvars, coords, detail::get<std::string>(j, "poly"));
  MultiSeries f(ctx, nvars, coords);
  for (const auto& t : detail::field(j, "terms")) {
    auto e = detail::get<std::vector<int>>(t, "exp");
    require(e.size() == nvars, ErrorCode::InvalidInput, "exponent vector has the wrong length");
    for (int x : e) require(x >= 0, ErrorCode::InvalidInput, "negative exponent");
    Monomial m = Monomial::from_exponents(e);
    require(f.coefficient(m).is_zero(), ErrorCode::InvalidInput, "repeated monomial in series JSON");
    f.add_term(m, scalar_from_json(ctx, detail::field(t, "coeff")));
  }
  return f;
}

inline Json to_json(const IdealPresentation& I) {
  Json gens = Json::array();
  for (const auto& g : I.generators()) gens.push_back(to_json(g));
  return {{"flavor", I.flavor() == RingFlavor::Rn ? "Rn" : "An"},
          {"coords", std::string(coords_name(I.coords()))},
          {"exact", I.is_exact()},
          {"generators", gens}};
}

inline IdealPresentation ideal_from_json(const CoefficientContext& ctx, const Json& j) {
  std::string flavor_name = detail::get<std::string>(j, "flavor");
  require(flavor_name == "Rn" || flavor_name == "An", ErrorCode::InvalidInput, "flavor must be \"Rn\" or \"An\"");
  RingFlavor flavor = flavor_name == "Rn" ? RingFlavor::Rn : RingFlavor::An;
  Coords coords = detail::parse_coords(detail::get<std::string>(j, "coords"));
  bool exact = j.contains("exact") && detail::get<bool>(j, "exact");
  std::vector<MultiSeries> gens;
  for (const auto& g : detail::field(j, "generators")) {
    gens.push_back(series_from_json(ctx, g));
    require(gens.back().coords() == coords, ErrorCode::CoordinateMismatch, "generator coords differ from ideal coords");
  }
  require(!gens.empty(), ErrorCode::InvalidInput, "ideal needs at least one generator");
  if (exact) return IdealPresentation::with_exact_generators(flavor, std::move(gens));
  return IdealPresentation(flavor, std::move(gens));
}

inline Json to_json(const FrobeniusAction& phi) {
  Json alphas = Json::array();
  for (std::size_t i = 0; i < phi.nvars(); ++i) {
    if (const auto& exact = phi.exact_base_alphas()) {
      alphas.push_back((*exact)[i].get_str());
    } else {
      auto q = phi.base_alphas()[i].to_rational();
      require(q.has_value(), ErrorCode::ExactnessRequired, "eigenvalue has no small rational form");
      alphas.push_back(q->get_str());
    }
  }
  return {{"alphas", alphas}, {"weight", phi.weight()}, {"power", phi.power()}};
}

inline FrobeniusAction frobenius_from_json(const CoefficientContext& ctx, const Json& j) {
  std::vector<mpq_class> alphas;
  for (const auto& a : detail::field(j, "alphas")) {
    require(a.is_string() || a.is_number_integer(), ErrorCode::InvalidInput, "alphas must be rational strings");
    std::string text = a.is_string() ? a.get<std::string>() : std::to_string(a.get<long long>());
    mpq_class q;
    require(q.set_str(text, 10) == 0 && q.get_den() != 0, ErrorCode::InvalidInput, "not a rational number: " + text);
    q.canonicalize();
    alphas.push_back(q);
  }
  int weight = j.contains("weight") ? detail::get<int>(j, "weight") : 1;
  int power = j.contains("power") ? detail::get<int>(j, "power") : 1;
  return FrobeniusAction::from_rationals(ctx, alphas, weight, power);
}

inline Json to_json(const Character& chi) {
  Json values = Json::array();
  for (const auto& v : chi.values()) values.push_back(to_json(v));
  return {{"values", values}};
}

inline Character character_from_json(const CoefficientContext& ctx, const Json& j) {
  std::vector<PadicScalar> values;
  for (const auto& v : detail::field(j, "values")) values.push_back(scalar_from_json(ctx, v));
  return Character(std::move(values));
}

inline Json to_json(const EvaluationMap& pi) {
  Json lambdas = Json::array();
  for (const auto& l : pi.lambdas) lambdas.push_back(to_json(l));
  Json out{{"context", to_json(pi.aligned_alpha.context())},
           {"lambdas", lambdas},
           {"aligned_power", pi.aligned_power},
           {"aligned_alpha", to_json(pi.aligned_alpha)}};
  if (pi.exact_lambdas) {
    Json exact = Json::array();
    for (const auto& q : *pi.exact_lambdas) exact.push_back(q.get_str());
    out["exact_lambdas"] = exact;
  }
  return out;
}

inline EvaluationMap evaluation_map_from_json(const Json& j) {
  CoefficientContext ctx = context_from_json(detail::field(j, "context"));
  EvaluationMap pi{{}, detail::get<int>(j, "aligned_power"), scalar_from_json(ctx, detail::field(j, "aligned_alpha")),
                   std::nullopt};
  for (const auto& l : detail::field(j, "lambdas")) pi.lambdas.push_back(scalar_from_json(ctx, l));
  require(!pi.lambdas.empty(), ErrorCode::InvalidInput, "evaluation map needs lambdas");
  if (j.contains("exact_lambdas")) {
    std::vector<mpq_class> exact;
    for (const auto& q : j.at("exact_lambdas")) exact.emplace_back(q.get<std::string>());
    for (auto& q : exact) q.canonicalize();
    pi.exact_lambdas = exact;
  }
  return pi;
}

inline Json to_json(const DivisionResult& r) {
  Json rems = Json::array();
  for (const auto& x : r.remainders) rems.push_back(to_json(x));
  return {{"regular_order", r.regular_order}, {"quotient", to_json(r.quotient)}, {"remainders", rems}};
}

inline Json to_json(const WeierstrassFactorization& w) {
  return {{"regular_order", w.degree}, {"distinguished", to_json(w.distinguished)}, {"unit", to_json(w.unit)}};
}

inline Json to_json(const TrivializationResult& t) {
  Json out{{"c", to_json(t.c)}, {"h", to_json(t.h)}, {"precision_loss", t.precision_loss}, {"level_loss", t.level_loss}};
  if (t.g) {
    out["g"] = to_json(*t.g);
    out["degree"] = t.k_deg;
  }
  return out;
}

inline Json to_json(const FreeComplex& c) {
  Json diffs = Json::array();
  for (const auto& d : c.differentials()) {
    Json entries = Json::array();
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t k = 0; k < d.cols(); ++k) entries.push_back(d.at(r, k).to_string());
    diffs.push_back(entries);
  }
  return {{"n", c.nvars()}, {"degrees", {c.lo(), c.hi()}}, {"ranks", c.ranks()}, {"differentials", diffs}};
}

// Differentials are row-major lists of polynomial strings, one per degree
// from a to b - 1.
inline FreeComplex complex_from_json(const Json& j) {
  auto n = detail::get<std::size_t>(j, "n");
  require(n >= 1 && n <= Monomial::kMaxVars, ErrorCode::InvalidInput, "n must be between 1 and 7");
  auto degrees = detail::get<std::vector<int>>(j, "degrees");
  require(degrees.size() == 2 && degrees[0] <= degrees[1], ErrorCode::InvalidInput, "degrees must be [a, b] with a <= b");
  auto ranks = detail::get<std::vector<std::size_t>>(j, "ranks");
  require(ranks.size() == static_cast<std::size_t>(degrees[1] - degrees[0] + 1), ErrorCode::InvalidInput,
          "one rank per degree in [a, b]");
  const Json& diffs = detail::field(j, "differentials");
  require(diffs.is_array() && diffs.size() + 1 == ranks.size(), ErrorCode::InvalidInput,
          "one differential per adjacent pair of degrees");
  std::vector<PolyMatrix> mats;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    PolyMatrix m(ranks[k + 1], ranks[k], n);
    require(diffs[k].is_array() && diffs[k].size() == m.rows() * m.cols(), ErrorCode::InvalidInput,
            "differential has the wrong number of entries");
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        m.at(r, c) = RationalPolynomial::parse(diffs[k][r * m.cols() + c].get<std::string>(), n);
    mats.push_back(std::move(m));
  }
  return FreeComplex(n, degrees[0], std::move(ranks), std::move(mats));
}

inline Json to_json(const CohomologyProfile& p) {
  Json out = Json::array();
  for (const auto& [i, d] : p.dims) out.push_back({{"degree", i}, {"dim", d}});
  return out;
}

inline Json to_json(const WindowReport& w) {
  return {{"a", w.a}, {"b", w.b}, {"n", w.n}, {"window_ok", w.window_ok}, {"reduced", to_json(w.reduced)}};
}

}  // namespace padicprep::io
