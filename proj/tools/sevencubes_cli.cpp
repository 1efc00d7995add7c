#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sevencubes/sevencubes.hpp"

namespace {

using namespace sevencubes;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kExceptionalInput = 2,
  kNotMultipleOfFour = 3,
  kSearchExhausted = 4,
  kParseFailure = 5,
  kStepCap = 6,
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct DecomposeArgs {
  std::string n;
  bool json = false;
  bool text = false;
  bool force_fallback = false;
  std::uint64_t seed = RepresentOptions{}.seed;
  unsigned width = oracle::FallbackOptions{}.width;
};

int run_decompose(const DecomposeArgs& args) {
  Integer n;
  try {
    n = parse_integer(args.n);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  }
  if (mod_small(n, 4) != 0 || sgn(n) == 0) {
    std::cerr << "error: " << args.n << " is not a positive multiple of 4; only such N are handled\n";
    return kNotMultipleOfFour;
  }
  DecomposeOptions options;
  options.force_fallback = args.force_fallback;
  options.seed = args.seed;
  options.fallback.width = args.width;
  const auto start = std::chrono::steady_clock::now();
  Certificate cert;
  try {
    cert = decompose(n, options);
  } catch (const ExceptionalInput& e) {
    std::cerr << "error: " << e.what() << " (exceptional input)\n";
    return kExceptionalInput;
  } catch (const SearchExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSearchExhausted;
  }
  const double ms = elapsed_ms(start);
  const auto violation = find_violation(cert);

  if (args.json || !args.text) {
    json record;
    record["command"] = "decompose";
    record["input"] = {{"N", n.get_str()},
                       {"force_fallback", args.force_fallback},
                       {"seed", std::to_string(args.seed)},
                       {"width", args.width}};
    record["path"] = io::to_string(cert.path());
    record["certificate"] = io::to_json(cert);
    record["verified"] = !violation.has_value();
    record["elapsed_ms"] = ms;
    std::cout << record.dump(2) << '\n';
  } else {
    io::write_text(std::cout, cert);
    std::cout << "verified = " << (violation ? "false (" + *violation + ")" : std::string("true")) << '\n';
    std::cout << "elapsed_ms = " << ms << '\n';
  }
  return violation ? kVerificationFailed : kOk;
}

int run_verify(const std::string& source) {
  std::string text;
  std::error_code ec;
  if (!source.empty() && source.front() == '{') {
    text = source;
  } else if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  } else {
    std::cerr << "error: '" << source << "' is neither a file nor an inline JSON certificate\n";
    return kParseFailure;
  }
  Certificate cert;
  try {
    cert = io::parse_certificate(text);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  }
  if (auto violation = find_violation(cert)) {
    std::cout << "invalid: " << *violation << '\n';
    return kVerificationFailed;
  }
  std::cout << "valid: N = " << cert.n.get_str() << " (" << io::to_string(cert.path()) << ", "
            << io::to_string(cert.mode) << ")\n";
  return kOk;
}

int run_scan(std::uint64_t bound, std::uint64_t multiples_of, bool as_json) {
  const auto start = std::chrono::steady_clock::now();
  const auto found = oracle::scan_exceptional(bound, multiples_of);
  if (as_json) {
    json record;
    record["command"] = "scan";
    record["input"] = {{"max", std::to_string(bound)}, {"mults_of", std::to_string(multiples_of)}};
    record["exceptions"] = json::array();
    for (auto n : found) record["exceptions"].push_back(std::to_string(n));
    record["elapsed_ms"] = elapsed_ms(start);
    std::cout << record.dump(2) << '\n';
  } else {
    for (auto n : found) std::cout << n << '\n';
  }
  return kOk;
}

std::vector<unsigned> parse_classes(const std::string& spec) {
  if (spec == "all") return chains::all_classes();
  if (spec == "aux") return chains::auxiliary_prime_classes();
  std::vector<unsigned> out;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(static_cast<unsigned>(to_u64(parse_integer(item))));
  return out;
}

struct ChainArgs {
  std::string delta = "0.01";
  std::string classes = "all";
  std::string upper = "1e10";
  std::string seed_bound = "19541";
  std::string ratio_bound = "1.0584";
  std::string out;
  std::string in;
  bool json = false;
  unsigned threads = 1;
};

std::uint64_t parse_whole(const std::string& text) {
  Rational value = parse_decimal(text);
  if (value.get_den() != 1) throw ParseError("expected a whole number: " + text);
  return to_u64(value.get_num());
}

void print_chain_report(const chains::ChainRunReport& report, bool as_json) {
  if (as_json) {
    json record;
    record["command"] = "chains";
    record["classes"] = json::array();
    for (const auto& r : report.classes) {
      record["classes"].push_back({{"class", r.chain.residue},
                                   {"steps", r.chain.steps()},
                                   {"max_ratio", r.report.max_ratio.get_str()},
                                   {"max_index", r.report.max_index},
                                   {"verified", r.report.ok},
                                   {"failure", r.report.failure}});
    }
    record["all_verified"] = report.all_verified;
    record["global_max"] = report.global_max.get_str();
    record["argmax_class"] = report.argmax_class;
    record["argmax_step"] = report.argmax_step;
    record["max_steps"] = report.max_steps;
    record["total_primes"] = report.total_primes;
    std::cout << record.dump(2) << '\n';
    return;
  }
  for (const auto& r : report.classes) {
    std::cout << "class " << r.chain.residue << ": M = " << r.chain.steps() << ", max ratio "
              << r.report.max_ratio.get_str() << " at step " << r.report.max_index << ", "
              << (r.report.ok ? "verified" : "FAILED (" + r.report.failure + ")") << '\n';
  }
  std::cout << "global max " << report.global_max.get_str() << " (" << report.global_max.get_d() << ") at class "
            << report.argmax_class << " step " << report.argmax_step << '\n';
  std::cout << "max M = " << report.max_steps << ", total primes = " << report.total_primes << '\n';
  std::cout << (report.all_verified ? "all chains verified" : "verification FAILED") << '\n';
}

int run_chains(const ChainArgs& args) {
  chains::ChainRunOptions options;
  try {
    options.delta = parse_decimal(args.delta);
    options.classes = parse_classes(args.classes);
    options.upper = parse_whole(args.upper);
    options.seed_bound = parse_whole(args.seed_bound);
    options.ratio_bound = parse_decimal(args.ratio_bound);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  }
  options.threads = args.threads;
  chains::ChainRunReport report;
  try {
    report = chains::run_chains(options);
  } catch (const StepCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStepCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  }
  if (!args.out.empty()) {
    std::ofstream file(args.out);
    std::vector<chains::Chain> built;
    for (const auto& r : report.classes) built.push_back(r.chain);
    chains::write_chains(file, built);
    if (!file) {
      std::cerr << "error: could not write " << args.out << '\n';
      return kParseFailure;
    }
  }
  print_chain_report(report, args.json);
  return report.all_verified ? kOk : kVerificationFailed;
}

int run_chains_verify(const ChainArgs& args) {
  std::ifstream file(args.in);
  if (!file) {
    std::cerr << "error: cannot open " << args.in << '\n';
    return kParseFailure;
  }
  std::vector<chains::Chain> loaded;
  Rational bound;
  try {
    loaded = chains::read_chains(file);
    bound = parse_decimal(args.ratio_bound);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  }
  std::vector<chains::ClassResult> results;
  for (auto& chain : loaded) {
    auto report = chains::verify_chain(chain, bound);
    results.push_back({std::move(chain), std::move(report)});
  }
  const auto summary = chains::summarize(std::move(results));
  print_chain_report(summary, args.json);
  return summary.all_verified ? kOk : kVerificationFailed;
}

int run_selftest(const std::vector<std::uint64_t>& seeds) {
  const auto results = sevencubes::run_selftest(ReferenceValues{}, seeds);
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << '\n';
    all = all && r.passed;
  }
  return all ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seven-cube decompositions of multiples of 4, with supporting checks"};
  app.require_subcommand(1);

  DecomposeArgs decompose_args;
  auto* decompose_cmd = app.add_subcommand("decompose", "Write N (a multiple of 4) as a sum of seven cubes");
  decompose_cmd->add_option("N", decompose_args.n, "Target integer (decimal)")->required();
  auto* json_flag = decompose_cmd->add_flag("--json", decompose_args.json, "JSON output (default)");
  decompose_cmd->add_flag("--text", decompose_args.text, "Plain text output")->excludes(json_flag);
  decompose_cmd->add_flag("--force-fallback", decompose_args.force_fallback, "Skip the constructive path");
  decompose_cmd->add_option("--seed", decompose_args.seed, "Seed for randomized ternary-form sampling");
  decompose_cmd->add_option("--width", decompose_args.width, "Backtracking width of the fallback search");

  std::string verify_source;
  auto* verify_cmd = app.add_subcommand("verify", "Check a certificate (file path or inline JSON)");
  verify_cmd->add_option("certificate", verify_source, "Path to a certificate file, or the JSON itself")->required();

  std::uint64_t scan_max = 500, scan_mults = 1;
  bool scan_json = false;
  auto* scan_cmd = app.add_subcommand("scan", "List N <= max that are not sums of seven nonnegative cubes");
  scan_cmd->add_option("--max", scan_max, "Upper bound");
  scan_cmd->add_option("--mults-of", scan_mults, "Only scan multiples of this");
  scan_cmd->add_flag("--json", scan_json, "JSON output");

  ChainArgs chain_args;
  auto* chains_cmd = app.add_subcommand("chains", "Build and verify prime chains mod 72");
  chains_cmd->add_option("--delta", chain_args.delta, "Step factor delta (decimal)");
  chains_cmd->add_option("--classes", chain_args.classes, "all | aux (l = 2 mod 3) | comma-separated classes");
  chains_cmd->add_option("--upper", chain_args.upper, "Stop once a chain prime exceeds this");
  chains_cmd->add_option("--seed-bound", chain_args.seed_bound, "Chains start below this");
  chains_cmd->add_option("--ratio-bound", chain_args.ratio_bound, "Required bound on consecutive ratios");
  chains_cmd->add_option("--out", chain_args.out, "Write the chain certificate file here");
  chains_cmd->add_option("--threads", chain_args.threads, "Worker threads (one class per task)");
  chains_cmd->add_flag("--json", chain_args.json, "JSON report");

  auto* chains_verify_cmd = app.add_subcommand("chains-verify", "Verify a chain certificate file");
  chains_verify_cmd->add_option("--in", chain_args.in, "Chain certificate file")->required();
  chains_verify_cmd->add_option("--ratio-bound", chain_args.ratio_bound, "Required bound on consecutive ratios");
  chains_verify_cmd->add_flag("--json", chain_args.json, "JSON report");

  std::vector<std::uint64_t> selftest_seeds = {1, 2, 3};
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the fast built-in checks");
  selftest_cmd->add_option("--seed", selftest_seeds, "Seeds for the random decomposition checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*decompose_cmd) return run_decompose(decompose_args);
    if (*verify_cmd) return run_verify(verify_source);
    if (*scan_cmd) return run_scan(scan_max, scan_mults, scan_json);
    if (*chains_cmd) return run_chains(chain_args);
    if (*chains_verify_cmd) return run_chains_verify(chain_args);
    if (*selftest_cmd) return run_selftest(selftest_seeds);
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kOk;
}
