// hoff: command-line driver for the library.
//
// Every subcommand prints one artifact (JSON, or CSV for decay) to stdout or
// to --out. Exit status: 0 success, 1 unreadable input or failed checks,
// 2 violated hypothesis or bad configuration, 3 enumeration budget refused.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hoff/budget.hpp"
#include "hoff/errors.hpp"
#include "hoff/formcore.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/rng.hpp"
#include "hoff/serialize.hpp"
#include "hoff/variety.hpp"
#include "hoff/verify.hpp"

namespace {

using namespace hoff;
using io::Json;

struct RunConfig {
  std::uint32_t p = 2;
  unsigned k = 2;
  std::string n = "3";
  std::size_t m = 0, d = 0, r = 1, m0 = 1;
  double eps = 0.25;
  std::optional<double> c;
  std::string c_text;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;
  std::string out, input, format = "json", mode = "density";
  std::vector<std::size_t> dims;
  std::size_t samples = 50;
  int criterion = 0;
  bool monic = false, timing = false, dichotomy = false, lower = false, terms = false;
};

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

void require_prime(const RunConfig& cfg) {
  if (!is_prime(cfg.p)) throw InvalidArgument("p = " + std::to_string(cfg.p) + " is not prime");
}

void require_p_above_k(const RunConfig& cfg) {
  require_prime(cfg);
  if (cfg.p <= cfg.k)
    throw InvalidArgument("polynomial phases need p > k (got p = " + std::to_string(cfg.p) + ", k = " +
                          std::to_string(cfg.k) + ")");
}

// "4", "2..6" or "2,3,5"
std::vector<std::size_t> parse_n_values(const std::string& text) {
  std::vector<std::size_t> out;
  try {
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoul(text.substr(0, dots)), hi = std::stoul(text.substr(dots + 2));
      if (lo > hi) throw InvalidArgument("empty range '" + text + "'");
      for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot read n from '" + text + "'");
  }
  if (out.empty()) throw InvalidArgument("no value of n given");
  return out;
}

std::size_t single_n(const RunConfig& cfg) {
  const auto v = parse_n_values(cfg.n);
  if (v.size() != 1) throw InvalidArgument("this subcommand takes a single n");
  return v[0];
}

Json read_input(const RunConfig& cfg) {
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw ParseError("cannot open " + cfg.input);
  std::stringstream ss;
  ss << in.rdbuf();
  return io::parse(ss.str());
}

std::vector<std::size_t> form_dims(const RunConfig& cfg) {
  if (!cfg.dims.empty()) return cfg.dims;
  return std::vector<std::size_t>(cfg.k, single_n(cfg));
}

MultilinearForm load_form(const RunConfig& cfg) {
  if (!cfg.input.empty()) return io::multilinear_form_from_json(read_input(cfg));
  require_prime(cfg);
  Rng rng(cfg.seed);
  return MultilinearForm::random(cfg.p, form_dims(cfg), rng);
}

PolynomialFn load_polynomial(RunConfig& cfg) {
  if (!cfg.input.empty()) {
    PolynomialFn Q = io::polynomial_fn_from_json(read_input(cfg));
    cfg.p = Q.p();
    cfg.k = static_cast<unsigned>(std::max(Q.degree(), 1));
    require_p_above_k(cfg);
    return Q;
  }
  require_p_above_k(cfg);
  Rng rng(cfg.seed);
  return random_degree_k_polynomial(cfg.p, single_n(cfg), cfg.k, rng);
}

MultilinearVariety load_variety(const RunConfig& cfg) {
  if (!cfg.input.empty()) return io::variety_from_json(read_input(cfg));
  require_prime(cfg);
  Rng rng(cfg.seed);
  const auto dims = form_dims(cfg);
  MultilinearVariety W(cfg.p, dims);
  for (std::size_t i = 0; i < cfg.r; ++i) {
    const SlotMask mask = static_cast<SlotMask>(1 + rng.below(full_mask(dims.size())));
    std::vector<std::size_t> sub;
    for (auto s : mask_slots(mask)) sub.push_back(dims[s]);
    W.add_constraint(mask, MultilinearForm::random(cfg.p, sub, rng));
  }
  return W;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + cfg.out);
  f << text;
}

int cmd_mobius_sum(const RunConfig& cfg) {
  require_prime(cfg);
  const auto ns = parse_n_values(cfg.n);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (auto n : ns) arr.push_back({{"p", cfg.p}, {"n", n}, {"monic", cfg.monic}, {"sum", mobius_sum(cfg.p, n, cfg.monic)}});
    emit(cfg, io::dump(ns.size() == 1 ? arr[0] : arr));
    return 0;
  }
  std::string text;
  for (auto n : ns) text += (ns.size() > 1 ? std::to_string(n) + "," : "") + std::to_string(mobius_sum(cfg.p, n, cfg.monic)) + "\n";
  emit(cfg, text);
  return 0;
}

int cmd_correlation(RunConfig& cfg) {
  const PolynomialFn Q = load_polynomial(cfg);
  const CorrelationReport rep = mobius_correlation(Q, cfg.timing, cfg.seed + 1);
  Json j = io::to_json(rep);
  const double c = cfg.c.value_or(rep.abs_S);
  if (cfg.dichotomy) j["dichotomy"] = io::to_json(vaughan_dichotomy_check(Q, c, cfg.m0));
  if (cfg.lower) {
    const double bias_LQ = bias(derived_symmetric_form(Q, cfg.k, false)).to_double();
    j["degree_lowering"] = io::to_json(degree_lowering(Q, cfg.k, cfg.c.value_or(std::min(rep.abs_S, bias_LQ)), cfg.seed));
  }
  emit(cfg, io::dump(j));
  return 0;
}

int cmd_bias(const RunConfig& cfg) {
  const MultilinearForm alpha = load_form(cfg);
  const ExactFraction b = bias(alpha);
  Json j;
  j["form"] = io::to_json(alpha);
  j["bias"] = io::to_json(b);
  j["rank_codimension"] = static_cast<double>(-b.log_p());
  j["character_sum"] = {{"re", bias_direct_oracle(alpha).real()}, {"im", bias_direct_oracle(alpha).imag()}};
  emit(cfg, io::dump(j));
  return 0;
}

MlApproxOptions approx_options(const RunConfig& cfg) {
  MlApproxOptions o;
  o.materialize_terms = cfg.terms;
  return o;
}

int cmd_approx_ml(const RunConfig& cfg) {
  const MultilinearForm alpha = load_form(cfg);
  emit(cfg, io::dump(io::to_json(approximate_multilinear_phase(alpha, cfg.eps, cfg.seed, approx_options(cfg)), cfg.terms)));
  return 0;
}

int cmd_approx_poly(RunConfig& cfg) {
  const PolynomialFn Q = load_polynomial(cfg);
  emit(cfg, io::dump(io::to_json(approximate_polynomial_phase(Q, cfg.eps, cfg.seed), cfg.terms)));
  return 0;
}

int cmd_gowers_inverse(RunConfig& cfg) {
  const PolynomialFn Q = load_polynomial(cfg);
  emit(cfg, io::dump(io::to_json(gowers_inverse_polynomial(Q, cfg.k, cfg.seed))));
  return 0;
}

int cmd_variety(const RunConfig& cfg) {
  Json j;
  if (cfg.mode == "density") {
    const MultilinearVariety W = load_variety(cfg);
    const ExactFraction dens = variety_density(W);
    j["variety"] = io::to_json(W);
    j["count"] = W.count();
    j["density"] = io::to_json(dens);
    j["codimension_bound"] = W.codimension_bound();
    j["meets_codimension_density"] =
        !(dens < ExactFraction::inverse_power(W.p(), static_cast<std::uint32_t>(W.codimension_bound())));
  } else if (cfg.mode == "finder") {
    const MultilinearVariety W = load_variety(cfg);
    const FinderResult res = subvariety_finder(W, cfg.r);
    j["variety"] = io::to_json(W);
    j["status"] = to_string(res.status);
    j["dictionary_size"] = res.dictionary_size;
    j["combinations_tried"] = res.combinations_tried;
    j["found"] = res.variety ? io::to_json(*res.variety) : Json();
  } else if (cfg.mode == "fiber") {
    const MultilinearForm alpha = load_form(cfg);
    if (alpha.k() < 2) throw InvalidArgument("fiber mode needs a form with at least two slots");
    const std::size_t split = cfg.m ? cfg.m : alpha.k() / 2;
    const ExactFraction c =
        cfg.c_text.empty() ? ExactFraction::inverse_power(alpha.p(), 1) : ExactFraction::parse(cfg.c_text, alpha.p());
    FiberOptions opts;
    opts.max_codim = cfg.r;
    j = io::to_json(biased_fiber_variety(alpha, split, c, cfg.seed, opts));
  } else {
    throw InvalidArgument("unknown variety mode '" + cfg.mode + "' (density, finder, fiber)");
  }
  emit(cfg, io::dump(j));
  return 0;
}

int cmd_cascade(RunConfig& cfg) {
  const PolynomialFn Q = load_polynomial(cfg);
  if (cfg.m == 0 || cfg.d == 0) throw InvalidArgument("cascade needs --m and --d");
  emit(cfg, io::dump(io::to_json(bias_cascade_report(Q, cfg.d, cfg.m))));
  return 0;
}

int cmd_decay(const RunConfig& cfg) {
  require_p_above_k(cfg);
  const DecayTable t = decay_experiment(cfg.p, cfg.k, parse_n_values(cfg.n), cfg.samples, cfg.seed);
  emit(cfg, cfg.format == "csv" ? t.to_csv() : io::dump(io::to_json(t)));
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  std::vector<CriterionResult> results;
  const bool stream = cfg.out.empty() && cfg.format != "json";
  auto report = [&](const CriterionResult& r) {
    if (stream) std::cout << format_line(r) << std::endl;
  };
  if (cfg.criterion) {
    results.push_back(run_criterion(cfg.criterion, opts));
    report(results.back());
  } else {
    results = run_acceptance(opts, report);
  }
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : results)
      arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds}, {"detail", r.detail}});
    emit(cfg, io::dump(Json{{"passed", passed}, {"total", results.size()}, {"criteria", arr}}));
  } else {
    std::string text;
    if (!stream)
      for (const auto& r : results) text += format_line(r) + "\n";
    text += std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
    emit(cfg, text);
  }
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial phases, multilinear forms and Mobius correlations over F_p[t]"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Field characteristic");
    sub->add_option("--k", cfg.k, "Degree, or number of form slots");
    sub->add_option("--n", cfg.n, "Dimension; decay and mobius-sum accept 2..6 or 2,3,4");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--budget", cfg.budget, "Maximum points per enumeration")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "Write the artifact here instead of stdout");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--input", cfg.input, "Read the object from a JSON file");
  };
  auto form_shape = [&](CLI::App* sub) {
    sub->add_option("--dims", cfg.dims, "Slot dimensions (default: k slots of dimension n)")->delimiter(',');
  };

  auto* mobius = app.add_subcommand("mobius-sum", "Sum of mu over A_n (--monic) or G_n");
  common(mobius);
  mobius->add_flag("--monic", cfg.monic, "Sum over monic polynomials of degree n");

  auto* correlation = app.add_subcommand("correlation", "Mobius correlation of chi(Q)");
  common(correlation);
  correlation->add_flag("--timing", cfg.timing, "Record wall-clock time");
  correlation->add_flag("--dichotomy", cfg.dichotomy, "Add the averaging dichotomy report");
  correlation->add_flag("--lower", cfg.lower, "Add the degree-lowering step");
  correlation->add_option("--c", cfg.c, "Correlation lower bound (default: measured)");
  correlation->add_option("--m0", cfg.m0, "Smallest multiplier degree for composed forms");

  auto* bias_cmd = app.add_subcommand("bias", "Exact bias of a multilinear form");
  common(bias_cmd);
  form_shape(bias_cmd);

  auto* approx_ml = app.add_subcommand("approx-ml", "Approximate chi(alpha) by multiaffine phases");
  common(approx_ml);
  form_shape(approx_ml);
  approx_ml->add_option("--eps", cfg.eps, "Target L2 error");
  approx_ml->add_flag("--terms", cfg.terms, "Materialize and emit every term");

  auto* approx_poly = app.add_subcommand("approx-poly", "Approximate chi(Q) by lower-degree phases");
  common(approx_poly);
  approx_poly->add_option("--eps", cfg.eps, "Target L2 error");
  approx_poly->add_flag("--terms", cfg.terms, "Emit every term");

  auto* gowers = app.add_subcommand("gowers-inverse", "Gowers norm and a correlating lower-degree phase");
  common(gowers);

  auto* variety = app.add_subcommand("variety", "Multilinear variety density, subvariety search, biased fibers");
  common(variety);
  form_shape(variety);
  variety->add_option("--mode", cfg.mode, "density, finder or fiber")->check(CLI::IsMember({"density", "finder", "fiber"}));
  variety->add_option("--r", cfg.r, "Random constraints, or the codimension cap");
  variety->add_option("--m", cfg.m, "Fiber mode: number of leading slots");
  variety->add_option("--c", cfg.c_text, "Fiber mode: bias threshold, e.g. 1/9");

  auto* cascade = app.add_subcommand("cascade", "Bias cascade on G_d^k through a base-w decomposition");
  common(cascade);
  cascade->add_option("--m", cfg.m, "Degree bound m of the variety W on G_m^k")->required();
  cascade->add_option("--d", cfg.d, "Block length d")->required();

  auto* decay = app.add_subcommand("decay", "Maximum |S| over sampled Q as n grows");
  common(decay);
  decay->add_option("--samples", cfg.samples, "Random polynomials per n");

  auto* verify = app.add_subcommand("verify", "Run the acceptance property suite");
  common(verify);
  verify->add_option("--criterion", cfg.criterion, "Run a single criterion")->check(CLI::Range(1, kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (decay->parsed() && !decay->count("--format")) cfg.format = "csv";
  if ((mobius->parsed() || verify->parsed()) && !app.get_subcommands()[0]->count("--format")) cfg.format = "text";

  try {
    if (cfg.budget) set_enumeration_budget(cfg.budget);
    if (mobius->parsed()) return cmd_mobius_sum(cfg);
    if (correlation->parsed()) return cmd_correlation(cfg);
    if (bias_cmd->parsed()) return cmd_bias(cfg);
    if (approx_ml->parsed()) return cmd_approx_ml(cfg);
    if (approx_poly->parsed()) return cmd_approx_poly(cfg);
    if (gowers->parsed()) return cmd_gowers_inverse(cfg);
    if (variety->parsed()) return cmd_variety(cfg);
    if (cascade->parsed()) return cmd_cascade(cfg);
    if (decay->parsed()) return cmd_decay(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
  } catch (const BudgetExceeded& e) {
    std::cerr << "hoff: budget refused: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "hoff: " << e.what() << "\n";
    return 1;
  } catch (const HypothesisFailure& e) {
    std::cerr << "hoff: hypothesis failed: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "hoff: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hoff: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
