#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "padicprep/io.hpp"

namespace padicprep::pipeline {

// JSON-level steps shared by the command-line front-end and the acceptance
// driver.

inline MultiSeries in_log_coords(const MultiSeries& f) {
  return f.coords() == Coords::X ? f : change_coords(f, Coords::X);
}

inline IdealPresentation in_log_coords(const IdealPresentation& I) {
  if (I.coords() == Coords::X) return I;
  std::vector<MultiSeries> gens;
  for (const auto& g : I.generators()) gens.push_back(change_coords(g, Coords::X));
  if (I.is_exact()) {
    try {
      return IdealPresentation::with_exact_generators(I.flavor(), gens);
    } catch (const Error&) {
      // Exactness does not survive the coordinate change for every input.
    }
  }
  return IdealPresentation(I.flavor(), std::move(gens));
}

// Samples x = l^s * m with m a nonzero integer and s large enough that
// every lambda_i * x lies in l * Z_l.
inline io::Json sample_subgroup(const EvaluationMap& pi, int samples, std::uint64_t seed) {
  const auto& ctx = pi.aligned_alpha.context();
  std::mt19937_64 rng(seed);
  std::int64_t min_v = 0;
  for (const auto& l : pi.lambdas)
    if (!l.is_zero()) min_v = std::min(min_v, l.valuation());
  const std::int64_t base = 1 - min_v;
  io::Json out = io::Json::array();
  for (int k = 0; k < samples; ++k) {
    long m = 0;
    while (m == 0) m = std::uniform_int_distribution<long>(-999, 999)(rng);
    auto s = static_cast<int>(base + static_cast<std::int64_t>(rng() % 2));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), ctx.prime(), static_cast<unsigned long>(s));
    PadicScalar x = PadicScalar::from_rational(ctx, mpq_class(mpz_class(m) * scale));
    auto chi = subgroup_points(pi, {x}).front();
    out.push_back({{"x", io::to_json(x)}, {"character", io::to_json(chi)}});
  }
  return {{"context", io::to_json(ctx)}, {"samples", out}};
}

// `chars` is either one character or a sample_subgroup payload.
inline io::Json evaluate_at_characters(const IdealPresentation& I, const io::Json& chars) {
  const auto& ctx = I.context();
  std::vector<Character> list;
  if (chars.contains("samples")) {
    for (const auto& s : chars.at("samples")) list.push_back(io::character_from_json(ctx, io::detail::field(s, "character")));
  } else {
    list.push_back(io::character_from_json(ctx, chars));
  }
  io::Json evaluations = io::Json::array();
  bool all = true;
  for (const auto& chi : list) {
    io::Json values = io::Json::array();
    bool vanishes = true;
    for (const auto& v : eval_ideal_at_char(I, chi)) {
      values.push_back(io::to_json(v));
      vanishes = vanishes && v.vanishes();
    }
    all = all && vanishes;
    evaluations.push_back({{"values", values}, {"vanishes", vanishes}});
  }
  return {{"evaluations", evaluations}, {"vanishes", all}};
}

}  // namespace padicprep::pipeline
