#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "oeq/decomposition.hpp"
#include "oeq/equation.hpp"
#include "oeq/generators.hpp"
#include "oeq/io.hpp"
#include "oeq/linalg.hpp"

namespace {

using Json = nlohmann::ordered_json;

// Exit codes: 0 pass, 1 residual or verification failure, 2 input error
// (files, flags, malformed data), 3 pipeline failure (extraction stages,
// nonlinearity, synthesis misses).
constexpr int kExitPass = 0;
constexpr int kExitResidual = 1;
constexpr int kExitInput = 2;
constexpr int kExitPipeline = 3;

struct GenFlags {
  std::vector<oeq::Index> dims;  // n m
  oeq::Index span_rank = 0;      // 0: derived as degenerate rank + n
  oeq::Index degenerate_rank = 0;
  std::uint64_t seed = 0;
  std::string sections = "polynomial";
  std::string pairing = "standard";
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags) {
  cmd->add_option("--dims", flags.dims, "domain and codomain dimensions (n m)")
      ->expected(2)
      ->required();
  cmd->add_option("--rank-l", flags.span_rank,
                  "span rank (default: rank-m + n)");
  cmd->add_option("--rank-m", flags.degenerate_rank, "degenerate rank (default 0)");
  cmd->add_option("--seed", flags.seed, "generator seed (default 0)");
  cmd->add_option("--sections", flags.sections, "section offsets")
      ->check(CLI::IsMember({"zero", "polynomial", "trigonometric"}));
  cmd->add_option("--pairing", flags.pairing, "pairing style")
      ->check(CLI::IsMember({"standard", "random-spd", "random-invertible"}));
}

oeq::GenConfig config_from_flags(const GenFlags& flags) {
  oeq::GenConfig config;
  config.domain_dim = flags.dims.at(0);
  config.codomain_dim = flags.dims.at(1);
  config.degenerate_rank = flags.degenerate_rank;
  config.span_rank =
      flags.span_rank > 0 ? flags.span_rank : flags.degenerate_rank + config.domain_dim;
  config.seed = flags.seed;
  config.section_mode = *oeq::parse_section_mode(flags.sections);
  config.pairing_mode = *oeq::parse_pairing_mode(flags.pairing);
  return config;
}

// The verify report is always a JSON document so harnesses can consume it
// without a flag; --json is accepted for uniformity with the other commands.
int run_verify(const std::string& path, double tol) {
  const oeq::Instance instance = oeq::load_instance(path);
  const oeq::ResidualReport report = oeq::residual(instance);
  const double scale = oeq::pairing_scale(instance);
  const double threshold = tol * scale;
  const bool passed = report.max_abs_residual <= threshold;
  Json out;
  out["max_abs_residual"] = report.max_abs_residual;
  out["threshold"] = threshold;
  out["scale"] = scale;
  out["pair_count"] = report.pair_count;
  out["worst_f_index"] = report.worst_f_index;
  out["worst_g_index"] = report.worst_g_index;
  out["passed"] = passed;
  std::cout << out.dump(2) << "\n";
  return passed ? kExitPass : kExitResidual;
}

int run_extract(const std::string& in_path, const std::string& out_path, double tol,
                bool as_json) {
  const oeq::Instance instance = oeq::load_instance(in_path);
  const oeq::ExtractionDetail detail = oeq::extract_detailed(instance, tol);
  oeq::save_decomposition(detail.decomposition, out_path);
  const oeq::Decomposition& dec = detail.decomposition;
  const oeq::VerificationReport verdict =
      oeq::verify_decomposition(dec, instance, tol);
  if (as_json) {
    Json out;
    out["span_rank"] = dec.span.rank();
    out["degenerate_rank"] = dec.degenerate.rank();
    out["core_condition"] = verdict.core_condition;
    out["input_residual"] = detail.input_residual;
    out["dual_fit_residual"] = detail.dual_fit_residual;
    out["quotient_fit_residual"] = detail.quotient_fit_residual;
    out["identity_residual"] = detail.identity_residual;
    out["containment_residual"] = verdict.containment_residual;
    out["projection_identity_residual"] = verdict.projection_identity_residual;
    out["restriction_identity_residual"] = verdict.restriction_identity_residual;
    out["forward_match_residual"] = verdict.forward_match_residual;
    out["dual_match_residual"] = verdict.dual_match_residual;
    out["equation_residual"] = verdict.equation_residual;
    out["verified"] = verdict.passed;
    out["output"] = out_path;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "span rank " << dec.span.rank() << ", degenerate rank "
              << dec.degenerate.rank() << ", core condition "
              << verdict.core_condition << "\n";
    std::cout << "fit residuals " << detail.dual_fit_residual << " / "
              << detail.quotient_fit_residual << ", identity residual "
              << detail.identity_residual << "\n";
    std::cout << "verify: containment " << verdict.containment_residual
              << ", projection identity " << verdict.projection_identity_residual
              << ", restriction identity " << verdict.restriction_identity_residual
              << "\n";
    std::cout << "verify: forward match " << verdict.forward_match_residual
              << ", dual match " << verdict.dual_match_residual << ", equation "
              << verdict.equation_residual << " -> "
              << (verdict.passed ? "ok" : "failed") << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
  return verdict.passed ? kExitPass : kExitResidual;
}

int run_gen(const GenFlags& flags, const std::string& out_path, bool as_json) {
  const oeq::GenConfig config = config_from_flags(flags);
  const oeq::Instance instance = oeq::gen_instance(config);
  oeq::save_instance(instance, out_path);
  if (as_json) {
    Json out;
    out["n"] = instance.domain_dim();
    out["m"] = instance.codomain_dim();
    out["span_rank"] = config.span_rank;
    out["degenerate_rank"] = config.degenerate_rank;
    out["seed"] = config.seed;
    out["f_samples"] = instance.f_map.size();
    out["g_samples"] = instance.g_map.size();
    out["output"] = out_path;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "wrote " << out_path << ": n=" << instance.domain_dim()
              << " m=" << instance.codomain_dim() << " span=" << config.span_rank
              << " degenerate=" << config.degenerate_rank << " samples="
              << instance.f_map.size() << "+" << instance.g_map.size()
              << " seed=" << config.seed << "\n";
  }
  return kExitPass;
}

int run_roundtrip(const GenFlags& flags, double tol, bool as_json) {
  const oeq::GenConfig config = config_from_flags(flags);
  const oeq::GeneratedCase generated = oeq::gen_case(config);
  const oeq::Instance instance =
      oeq::synthesize(generated.decomposition, generated.x_grid, generated.alpha_grid);
  const double scale = oeq::pairing_scale(instance);
  const oeq::ResidualReport input_report = oeq::residual(instance);

  const oeq::ExtractionDetail detail = oeq::extract_detailed(instance, tol);
  const oeq::Decomposition& dec = detail.decomposition;
  const oeq::VerificationReport verdict =
      oeq::verify_decomposition(dec, instance, tol);

  const oeq::Instance rebuilt =
      oeq::synthesize(dec, generated.x_grid, generated.alpha_grid);
  double rebuild_gap = 0.0;
  for (std::size_t i = 0; i < instance.f_map.size(); ++i) {
    rebuild_gap = std::max(rebuild_gap, (rebuilt.f_map.samples()[i].out -
                                         instance.f_map.samples()[i].out)
                                            .norm());
  }
  for (std::size_t j = 0; j < instance.g_map.size(); ++j) {
    rebuild_gap = std::max(rebuild_gap, (rebuilt.g_map.samples()[j].out -
                                         instance.g_map.samples()[j].out)
                                            .norm());
  }
  const bool passed = verdict.passed && rebuild_gap <= tol * scale;

  if (as_json) {
    Json out;
    out["n"] = instance.domain_dim();
    out["m"] = instance.codomain_dim();
    out["seed"] = config.seed;
    out["input_residual"] = input_report.max_abs_residual;
    out["scale"] = scale;
    out["span_rank"] = dec.span.rank();
    out["degenerate_rank"] = dec.degenerate.rank();
    out["core_condition"] = oeq::condition_number(dec.core);
    out["identity_residual"] = detail.identity_residual;
    out["verified"] = verdict.passed;
    out["equation_residual"] = verdict.equation_residual;
    out["rebuild_gap"] = rebuild_gap;
    out["passed"] = passed;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "gen: n=" << instance.domain_dim() << " m=" << instance.codomain_dim()
              << " span=" << config.span_rank << " degenerate="
              << config.degenerate_rank << " seed=" << config.seed << "\n";
    std::cout << "synthesize: " << instance.f_map.size() << "+"
              << instance.g_map.size() << " samples, residual "
              << input_report.max_abs_residual << " (scale " << scale << ")\n";
    std::cout << "extract: span rank " << dec.span.rank() << ", degenerate rank "
              << dec.degenerate.rank() << ", core condition "
              << oeq::condition_number(dec.core) << ", identity residual "
              << detail.identity_residual << "\n";
    std::cout << "verify: " << (verdict.passed ? "ok" : "failed")
              << ", equation residual " << verdict.equation_residual << "\n";
    std::cout << "resynthesize: max gap " << rebuild_gap << "\n";
    std::cout << (passed ? "PASS" : "FAIL") << "\n";
  }
  return passed ? kExitPass : kExitResidual;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verify, synthesise and decompose solution pairs of the "
               "orthogonality equation"};
  app.require_subcommand(1);

  std::string verify_path;
  double verify_tol = oeq::kDefaultTol;
  bool verify_json = false;
  CLI::App* verify = app.add_subcommand("verify", "check an instance against the equation");
  verify->add_option("instance", verify_path, "instance JSON file")->required();
  verify->add_option("--tol", verify_tol, "relative residual tolerance");
  verify->add_flag("--json", verify_json,
                   "machine-readable output (verify always reports JSON)");

  std::string extract_in;
  std::string extract_out;
  double extract_tol = oeq::kDefaultTol;
  bool extract_json = false;
  CLI::App* extract =
      app.add_subcommand("extract", "recover a structure certificate from an instance");
  extract->add_option("instance", extract_in, "instance JSON file")->required();
  extract->add_option("-o,--out", extract_out, "output decomposition JSON file")
      ->required();
  extract->add_option("--tol", extract_tol, "pipeline tolerance");
  extract->add_flag("--json", extract_json, "machine-readable output");

  GenFlags gen_flags;
  std::string gen_out;
  bool gen_json = false;
  CLI::App* gen = app.add_subcommand("gen", "generate a random solvable instance");
  add_gen_flags(gen, gen_flags);
  gen->add_option("-o,--out", gen_out, "output instance JSON file")->required();
  gen->add_flag("--json", gen_json, "machine-readable output");

  GenFlags roundtrip_flags;
  double roundtrip_tol = oeq::kDefaultTol;
  bool roundtrip_json = false;
  CLI::App* roundtrip = app.add_subcommand(
      "roundtrip", "generate, synthesise, extract and verify in one pass");
  add_gen_flags(roundtrip, roundtrip_flags);
  roundtrip->add_option("--tol", roundtrip_tol, "pipeline tolerance");
  roundtrip->add_flag("--json", roundtrip_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInput;
  }

  try {
    if (*verify) {
      (void)verify_json;
      return run_verify(verify_path, verify_tol);
    }
    if (*extract) return run_extract(extract_in, extract_out, extract_tol, extract_json);
    if (*gen) return run_gen(gen_flags, gen_out, gen_json);
    if (*roundtrip) return run_roundtrip(roundtrip_flags, roundtrip_tol, roundtrip_json);
  } catch (const oeq::ExtractError& err) {
    std::cerr << "error [" << oeq::to_string(err.stage()) << "]: " << err.what()
              << "\n";
    return kExitPipeline;
  } catch (const oeq::NotLinearError& err) {
    std::cerr << "error [not-linear]: " << err.what() << "\n";
    return kExitPipeline;
  } catch (const oeq::NotHilbertError& err) {
    std::cerr << "error [not-hilbert]: " << err.what() << "\n";
    return kExitPipeline;
  } catch (const oeq::FileFormatError& err) {
    std::cerr << "error [file]: " << err.what() << "\n";
    return kExitInput;
  } catch (const oeq::ValidationError& err) {
    std::cerr << "error [input]: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitPipeline;
  }
  return kExitInput;
}
