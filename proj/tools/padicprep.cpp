// Batch front-end: one subcommand per operation, JSON in and JSON out.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "padicprep/padicprep.hpp"

namespace {

using padicprep::io::Json;
namespace pp = padicprep;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Request {
  std::string command;
  std::uint64_t prime = 0;
  int precision = 0;
  int degree = 0;
  std::string input, frobenius, ideal, character, map, output, strategy = "blockwise";
  std::size_t n = 0;
  int samples = 8;
  std::optional<std::uint64_t> seed;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    pp::fail(pp::ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

std::uint64_t resolve_seed(const Request& r) {
  if (r.seed) return *r.seed;
  if (const char* env = std::getenv("PADIC_PREP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw UsageError("PADIC_PREP_SEED is not an unsigned integer");
    }
  }
  return 0;
}

pp::CoefficientContext context(const Request& r) { return pp::CoefficientContext(r.prime, r.precision, r.degree); }

Json divide(const Request& r) {
  auto ctx = context(r);
  Json job = read_json(r.input);
  auto G = pp::io::series_from_json(ctx, pp::io::detail::field(job, "dividend"));
  auto F = pp::io::series_from_json(ctx, pp::io::detail::field(job, "divisor"));
  std::string strategy = job.contains("strategy") ? job.at("strategy").get<std::string>() : r.strategy;
  if (strategy != "blockwise" && strategy != "termwise") throw UsageError("strategy must be blockwise or termwise");
  auto s = strategy == "termwise" ? pp::DivisionStrategy::Termwise : pp::DivisionStrategy::Blockwise;
  return pp::io::to_json(pp::weierstrass_divide(G, F, s));
}

Json prepare(const Request& r) {
  auto ctx = context(r);
  Json job = read_json(r.input);
  return pp::io::to_json(pp::weierstrass_prepare(pp::io::series_from_json(ctx, pp::io::detail::field(job, "series"))));
}

Json phi_check(const Request& r) {
  auto ctx = context(r);
  auto I = pp::io::ideal_from_json(ctx, read_json(r.input));
  auto phi = pp::io::frobenius_from_json(ctx, read_json(r.frobenius));
  return {{"stable", pp::is_phi_stable(I, phi)}};
}

Json trivialize(const Request& r) {
  auto ctx = context(r);
  Json job = read_json(r.input);
  auto f = pp::pipeline::in_log_coords(pp::io::series_from_json(ctx, pp::io::detail::field(job, "series")));
  auto phi = pp::io::frobenius_from_json(ctx, read_json(r.frobenius));
  if (f.is_unit()) return pp::io::to_json(pp::trivialize_unit(f, phi));
  return pp::io::to_json(pp::homogenize_eigen(f, phi));
}

Json linearize(const Request& r) {
  auto ctx = context(r);
  auto I = pp::pipeline::in_log_coords(pp::io::ideal_from_json(ctx, read_json(r.input)));
  auto phi = pp::io::frobenius_from_json(ctx, read_json(r.frobenius));
  return pp::io::to_json(pp::linearize_phi_ideal(I, phi));
}

Json char_subgroup(const Request& r) {
  auto pi = pp::io::evaluation_map_from_json(read_json(r.map));
  if (r.samples < 1) throw UsageError("--samples must be positive");
  return pp::pipeline::sample_subgroup(pi, r.samples, resolve_seed(r));
}

Json char_eval(const Request& r) {
  auto ctx = context(r);
  return pp::pipeline::evaluate_at_characters(pp::io::ideal_from_json(ctx, read_json(r.ideal)), read_json(r.character));
}

Json koszul(const Request& r) {
  auto c = pp::koszul_complex(r.n);
  return {{"complex", pp::io::to_json(c)}, {"reduced", pp::io::to_json(pp::reduce_and_cohomology(c))}};
}

Json window(const Request& r) { return pp::io::to_json(pp::check_window(pp::io::complex_from_json(read_json(r.input)))); }

Json selftest(const Request& r, bool& all_passed) {
  Json checks = Json::array();
  int failed = 0;
  for (const auto& c : pp::run_selftest(resolve_seed(r))) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!c.passed) ++failed;
  }
  all_passed = failed == 0;
  return {{"checks", checks}, {"failed", failed}};
}

int max_loss(const Json& j) {
  int best = 0;
  if (j.is_object()) {
    if (j.contains("v") && j.contains("u") && j.contains("loss") && j.at("loss").is_number_integer())
      return j.at("loss").get<int>();
    for (const auto& [k, v] : j.items()) best = std::max(best, max_loss(v));
  } else if (j.is_array()) {
    for (const auto& v : j) best = std::max(best, max_loss(v));
  }
  return best;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weierstrass division, Frobenius linearization and Koszul windows over truncated l-adic series"};
  app.require_subcommand(1);
  Request req;

  auto add_context = [&](CLI::App* sub) {
    sub->add_option("--prime", req.prime, "residue characteristic l (odd prime)")->required();
    sub->add_option("--precision", req.precision, "l-adic digits N")->required();
    sub->add_option("--degree", req.degree, "truncation degree D")->required();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", req.output, "payload file (printed inline when absent)");
    sub->add_option("--seed", req.seed, "seed (falls back to PADIC_PREP_SEED, then 0)");
  };

  auto* divide_cmd = app.add_subcommand("divide", "Weierstrass division G = U*F + sum R_i t1^i");
  add_context(divide_cmd);
  divide_cmd->add_option("--input", req.input, "job with \"dividend\" and \"divisor\" series")->required();
  divide_cmd->add_option("--strategy", req.strategy, "blockwise or termwise");

  auto* prepare_cmd = app.add_subcommand("prepare", "Weierstrass preparation F = W*U");
  add_context(prepare_cmd);
  prepare_cmd->add_option("--input", req.input, "job with a \"series\"")->required();

  auto* phi_cmd = app.add_subcommand("phi-check", "is the ideal stable under phi");
  add_context(phi_cmd);
  phi_cmd->add_option("--input", req.input, "ideal JSON")->required();
  phi_cmd->add_option("--frobenius", req.frobenius, "Frobenius JSON")->required();

  auto* triv_cmd = app.add_subcommand("trivialize", "unit trivialization or eigen-homogenization");
  add_context(triv_cmd);
  triv_cmd->add_option("--input", req.input, "job with a \"series\"")->required();
  triv_cmd->add_option("--frobenius", req.frobenius, "Frobenius JSON")->required();

  auto* lin_cmd = app.add_subcommand("linearize", "evaluation map of a prime phi-ideal");
  add_context(lin_cmd);
  lin_cmd->add_option("--input", req.input, "ideal JSON")->required();
  lin_cmd->add_option("--frobenius", req.frobenius, "Frobenius JSON")->required();

  auto* sub_cmd = app.add_subcommand("char-subgroup", "characters chi_x(gamma_i) = exp(lambda_i x)");
  sub_cmd->add_option("--map", req.map, "evaluation map JSON")->required();
  sub_cmd->add_option("--samples", req.samples, "number of sampled x");

  auto* eval_cmd = app.add_subcommand("char-eval", "evaluate an ideal at characters");
  add_context(eval_cmd);
  eval_cmd->add_option("--ideal", req.ideal, "ideal JSON in t-coordinates")->required();
  eval_cmd->add_option("--char", req.character, "character JSON or char-subgroup output")->required();

  auto* koszul_cmd = app.add_subcommand("koszul", "Koszul complex and its reduction");
  koszul_cmd->add_option("--n", req.n, "number of variables")->required()->check(CLI::Range(1, 7));

  auto* window_cmd = app.add_subcommand("window", "amplitude window of a perfect complex");
  window_cmd->add_option("--input", req.input, "complex JSON")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "invariant suite of every module");

  for (auto* sub : {divide_cmd, prepare_cmd, phi_cmd, triv_cmd, lin_cmd, sub_cmd, eval_cmd, koszul_cmd, window_cmd,
                    selftest_cmd})
    add_output(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    emit({{"status", "error"}, {"error_code", "UsageError"}, {"message", e.what()}});
    return 2;
  }
  req.command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  Json payload;
  bool ok = true;
  try {
    if (req.command == "divide") payload = divide(req);
    else if (req.command == "prepare") payload = prepare(req);
    else if (req.command == "phi-check") payload = phi_check(req);
    else if (req.command == "trivialize") payload = trivialize(req);
    else if (req.command == "linearize") payload = linearize(req);
    else if (req.command == "char-subgroup") payload = char_subgroup(req);
    else if (req.command == "char-eval") payload = char_eval(req);
    else if (req.command == "koszul") payload = koszul(req);
    else if (req.command == "window") payload = window(req);
    else payload = selftest(req, ok);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    emit({{"status", "error"}, {"error_code", "UsageError"}, {"message", e.what()}});
    return 2;
  } catch (const pp::Error& e) {
    emit({{"status", "error"}, {"error_code", std::string(pp::to_string(e.code()))}, {"message", e.what()}});
    return 1;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  Json report{{"status", ok ? "ok" : "error"},
              {"error_code", ok ? Json(nullptr) : Json("SelftestFailed")},
              {"precision_loss", {{"max_loss", max_loss(payload)}}},
              {"elapsed_ms", elapsed}};
  if (req.output.empty()) {
    report["payload"] = payload;
  } else {
    std::ofstream out(req.output);
    if (!out) {
      std::cerr << "cannot write " << req.output << "\n";
      return 2;
    }
    out << payload.dump(2) << "\n";
    report["payload"] = req.output;
  }
  emit(report);
  return ok ? 0 : 1;
}
