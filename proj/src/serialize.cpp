#include "hoff/serialize.hpp"

#include <sstream>

#include "hoff/errors.hpp"
#include "hoff/modp.hpp"

namespace hoff::io {
namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError("at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::uint64_t get_uint(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned()) schema_error(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

double get_double(const Json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

const Json& get_array(const Json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected an array");
  return v;
}

std::uint32_t get_prime(const Json& j, const std::string& path) {
  const std::uint64_t p = get_uint(field(j, "p", path), path + "/p");
  if (p > 65535 || !is_prime(static_cast<std::uint32_t>(p))) schema_error(path + "/p", "p must be a prime below 65536");
  return static_cast<std::uint32_t>(p);
}

Residue get_residue(const Json& v, std::uint32_t p, const std::string& path) {
  const std::uint64_t c = get_uint(v, path);
  if (c >= p) schema_error(path, "coefficient out of range [0, p)");
  return static_cast<Residue>(c);
}

std::vector<std::size_t> get_dims(const Json& v, const std::string& path) {
  std::vector<std::size_t> dims;
  const Json& a = get_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) dims.push_back(get_uint(a[i], path + "/" + std::to_string(i)));
  return dims;
}

Json subset_json(SlotMask mask) {
  Json out = Json::array();
  for (auto s : mask_slots(mask)) out.push_back(s);
  return out;
}

SlotMask subset_from_json(const Json& v, std::size_t k, const std::string& path) {
  SlotMask mask = 0;
  const Json& a = get_array(v, path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t s = get_uint(a[i], path + "/" + std::to_string(i));
    if (s >= k) schema_error(path + "/" + std::to_string(i), "slot out of range");
    mask |= SlotMask{1} << s;
  }
  return mask;
}

// Rethrows library errors raised while building an object with the path.
template <class F>
auto build(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

MultilinearForm form_at(const Json& j, const std::string& path) {
  const std::uint32_t p = get_prime(j, path);
  const auto dims = get_dims(field(j, "dims", path), path + "/dims");
  MultilinearForm alpha = build(path, [&] { return MultilinearForm(p, dims); });
  const Json& entries = get_array(field(j, "entries", path), path + "/entries");
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string ep = path + "/entries/" + std::to_string(e);
    const Json& row = get_array(entries[e], ep);
    if (row.size() != dims.size() + 1) schema_error(ep, "expected k indices and a coefficient");
    Index idx(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      idx[i] = get_uint(row[i], ep + "/" + std::to_string(i));
      if (idx[i] >= dims[i]) schema_error(ep + "/" + std::to_string(i), "index out of range");
    }
    alpha.add_to(idx, get_residue(row.back(), p, ep + "/" + std::to_string(dims.size())));
  }
  return alpha;
}

MultiaffineForm multiaffine_at(const Json& j, const std::string& path) {
  const std::uint32_t p = get_prime(j, path);
  const auto dims = get_dims(field(j, "dims", path), path + "/dims");
  MultiaffineForm lambda(p, dims);
  const Json& comps = get_array(field(j, "components", path), path + "/components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cp = path + "/components/" + std::to_string(i);
    const SlotMask mask = subset_from_json(field(comps[i], "subset", cp), dims.size(), cp + "/subset");
    const MultilinearForm form = form_at(field(comps[i], "form", cp), cp + "/form");
    build(cp, [&] {
      lambda.add_component(mask, form);
      return 0;
    });
  }
  return lambda;
}

PolynomialFn polynomial_at(const Json& j, const std::string& path) {
  const std::uint32_t p = get_prime(j, path);
  const std::size_t n = get_uint(field(j, "n", path), path + "/n");
  PolynomialFn Q(p, n);
  const Json& terms = get_array(field(j, "terms", path), path + "/terms");
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tp = path + "/terms/" + std::to_string(t);
    const Json& row = get_array(terms[t], tp);
    if (row.size() != n + 1) schema_error(tp, "expected n exponents and a coefficient");
    Exponents e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = static_cast<std::uint32_t>(get_uint(row[i], tp + "/" + std::to_string(i)));
    Q.add_term(e, get_residue(row.back(), p, tp + "/" + std::to_string(n)));
  }
  return Q;
}

Json points_json(const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const auto& x : pts) out.push_back(x);
  return out;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // locate line and column of the failing byte
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + " (line " + std::to_string(line) +
                     ", column " + std::to_string(column) + ")");
  }
}

Json to_json(const ffpoly::PolyFp& f) { return Json{{"p", f.p()}, {"coeffs", f.coeffs()}}; }

ffpoly::PolyFp poly_fp_from_json(const Json& j) {
  const std::uint32_t p = get_prime(j, "");
  const Json& c = get_array(field(j, "coeffs", ""), "/coeffs");
  std::vector<Residue> coeffs;
  for (std::size_t i = 0; i < c.size(); ++i) coeffs.push_back(get_residue(c[i], p, "/coeffs/" + std::to_string(i)));
  return ffpoly::PolyFp(p, coeffs);
}

Json to_json(const MultilinearForm& alpha) {
  Json entries = Json::array();
  for (const auto& [idx, c] : alpha.entries()) {
    Json row = Json::array();
    for (auto i : idx) row.push_back(i);
    row.push_back(c);
    entries.push_back(row);
  }
  return Json{{"p", alpha.p()}, {"dims", alpha.dims()}, {"entries", entries}};
}

MultilinearForm multilinear_form_from_json(const Json& j) { return form_at(j, ""); }

Json to_json(const MultiaffineForm& lambda) {
  Json comps = Json::array();
  for (const auto& [mask, form] : lambda.components())
    comps.push_back(Json{{"subset", subset_json(mask)}, {"form", to_json(form)}});
  return Json{{"p", lambda.p()}, {"dims", lambda.dims()}, {"components", comps}};
}

MultiaffineForm multiaffine_form_from_json(const Json& j) { return multiaffine_at(j, ""); }

Json to_json(const PolynomialFn& Q) {
  Json terms = Json::array();
  for (const auto& [e, c] : Q.terms()) {
    Json row = Json::array();
    for (auto x : e) row.push_back(x);
    row.push_back(c);
    terms.push_back(row);
  }
  return Json{{"p", Q.p()}, {"n", Q.n()}, {"terms", terms}};
}

PolynomialFn polynomial_fn_from_json(const Json& j) { return polynomial_at(j, ""); }

Json to_json(const MultilinearVariety& W) {
  Json cons = Json::array();
  for (const auto& c : W.constraints()) cons.push_back(Json{{"subset", subset_json(c.subset)}, {"form", to_json(c.form)}});
  return Json{{"p", W.p()}, {"ambient", W.ambient()}, {"constraints", cons}};
}

MultilinearVariety variety_from_json(const Json& j) {
  const std::uint32_t p = get_prime(j, "");
  const auto ambient = get_dims(field(j, "ambient", ""), "/ambient");
  MultilinearVariety W(p, ambient);
  const Json& cons = get_array(field(j, "constraints", ""), "/constraints");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string cp = "/constraints/" + std::to_string(i);
    const SlotMask mask = subset_from_json(field(cons[i], "subset", cp), ambient.size(), cp + "/subset");
    const MultilinearForm form = form_at(field(cons[i], "form", cp), cp + "/form");
    build(cp, [&] {
      W.add_constraint(mask, form);
      return 0;
    });
  }
  return W;
}

Json to_json(const PhaseCombination& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    Json term{{"re", t.coefficient.real()}, {"im", t.coefficient.imag()}};
    if (const auto* lambda = std::get_if<MultiaffineForm>(&t.source)) {
      term["kind"] = "multiaffine";
      term["payload"] = to_json(*lambda);
    } else {
      term["kind"] = "polynomial";
      term["payload"] = to_json(std::get<PolynomialFn>(t.source));
    }
    terms.push_back(term);
  }
  return Json{{"m", c.m}, {"l1", c.l1}, {"l2_error", c.l2_error}, {"terms", terms}};
}

PhaseCombination phase_combination_from_json(const Json& j) {
  PhaseCombination c;
  c.m = get_uint(field(j, "m", ""), "/m");
  c.l1 = get_double(field(j, "l1", ""), "/l1");
  c.l2_error = get_double(field(j, "l2_error", ""), "/l2_error");
  const Json& terms = get_array(field(j, "terms", ""), "/terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = "/terms/" + std::to_string(i);
    const double re = get_double(field(terms[i], "re", tp), tp + "/re");
    const double im = get_double(field(terms[i], "im", tp), tp + "/im");
    const Json& kind = field(terms[i], "kind", tp);
    const Json& payload = field(terms[i], "payload", tp);
    if (kind == "multiaffine")
      c.terms.push_back({{re, im}, multiaffine_at(payload, tp + "/payload")});
    else if (kind == "polynomial")
      c.terms.push_back({{re, im}, polynomial_at(payload, tp + "/payload")});
    else
      schema_error(tp + "/kind", "expected \"multiaffine\" or \"polynomial\"");
  }
  return c;
}

Json to_json(const ExactFraction& x) {
  return Json{{"numerator", x.numerator().str()}, {"p", x.p()}, {"exponent", x.exponent()}, {"value", x.to_string()},
              {"approx", x.to_double()}};
}

ExactFraction exact_fraction_from_json(const Json& j) {
  const std::uint32_t p = get_prime(j, "");
  const Json& num = field(j, "numerator", "");
  if (!num.is_string()) schema_error("/numerator", "expected a decimal string");
  BigInt n;
  try {
    n = BigInt(num.get<std::string>());
  } catch (const std::exception&) {
    schema_error("/numerator", "not a decimal integer");
  }
  const std::uint64_t e = get_uint(field(j, "exponent", ""), "/exponent");
  return build("", [&] { return ExactFraction(n, p, static_cast<std::uint32_t>(e)); });
}

Json to_json(const Rational& x) { return Json{{"value", x.str()}, {"approx", static_cast<double>(x)}}; }

Json to_json(const CorrelationReport& r) {
  Json j{{"p", r.p},
         {"n", r.n},
         {"k", r.k},
         {"q_description", r.q_description},
         {"S", {{"re", r.S.real()}, {"im", r.S.imag()}}},
         {"abs_S", r.abs_S},
         {"constants", {{"re", r.constants.real()}, {"im", r.constants.imag()}}},
         {"permuted_deviation", r.permuted_deviation}};
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

Json to_json(const ExternalApproximation& r) {
  return Json{{"variety", to_json(r.variety)}, {"taus", points_json(r.taus)},   {"s", r.s},
              {"zero_set_size", r.zero_set_size}, {"excess", r.excess}, {"ambient_size", r.ambient_size},
              {"draws", r.draws}};
}

Json to_json(const FiberReport& r) {
  Json table = Json::array();
  for (const auto& pt : r.table) table.push_back(Json{{"index", pt.index}, {"slice_bias", pt.slice_bias.to_string()}});
  Json j{{"k", r.k},
         {"l", r.l},
         {"c", to_json(r.c)},
         {"seed", r.seed},
         {"draws", r.draws},
         {"max_codim", r.max_codim},
         {"eps", to_json(r.eps)},
         {"c_prime", to_json(r.c_prime)},
         {"s_c_size", r.s_c_size},
         {"a_size", r.a_size},
         {"b_size", r.b_size},
         {"a_density", to_json(r.a_density)},
         {"y", points_json(r.y)},
         {"finder_status", to_string(r.finder_status)},
         {"codimension", r.codimension},
         {"convolution",
          {{"positive", r.convolution.positive},
           {"size_precondition_ok", r.convolution.size_precondition_ok},
           {"min_value", static_cast<double>(r.convolution.min_value)},
           {"points_checked", r.convolution.points_checked}}},
         {"guaranteed_c_tilde_log_p", r.guaranteed_c_tilde_log_p},
         {"meets_guaranteed_bound", r.meets_guaranteed_bound},
         {"table", table}};
  j["variety"] = r.variety ? to_json(*r.variety) : Json(nullptr);
  j["measured_c_tilde"] = r.measured_c_tilde ? to_json(*r.measured_c_tilde) : Json(nullptr);
  return j;
}

namespace {
Json phase_average_json(const PhaseAverage& a) {
  const auto v = a.value();
  return Json{{"counts", a.counts}, {"total", a.total}, {"re", v.real()}, {"im", v.imag()}};
}
}  // namespace

Json to_json(const DichotomyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.vaughan_rows)
    rows.push_back(Json{{"m", row.m},
                        {"set", to_string(row.set)},
                        {"square_average", phase_average_json(row.square_average)},
                        {"fourfold", phase_average_json(row.fourfold)},
                        {"first_range", row.first_range},
                        {"second_range", row.second_range},
                        {"first_holds", row.first_holds},
                        {"second_holds", row.second_holds}});
  Json composed = Json::array();
  for (const auto& row : r.composed_rows) {
    Json hist = Json::array();
    for (const auto& [b, count] : row.bias_histogram) hist.push_back(Json{{"bias", b.to_string()}, {"count", count}});
    composed.push_back(Json{{"m", row.m},
                            {"in_range", row.in_range},
                            {"tuples", row.tuples},
                            {"mean_bias", to_json(row.mean_bias)},
                            {"bias_histogram", hist}});
  }
  return Json{{"p", r.p},
              {"n", r.n},
              {"k", r.k},
              {"m0", r.m0},
              {"c", r.c},
              {"measured", r.measured},
              {"first_threshold", r.first_threshold},
              {"second_threshold", r.second_threshold},
              {"vaughan_rows", rows},
              {"bias_LQ", to_json(r.bias_LQ)},
              {"composed_rows", composed},
              {"constant_slot", r.constant_slot},
              {"first_disjunct_positive", r.first_disjunct_positive},
              {"second_disjunct_positive", r.second_disjunct_positive}};
}

Json to_json(const ChevalleyWarningReport& r) {
  return Json{{"d", r.d},
              {"g", r.g},
              {"k", r.k},
              {"equations", r.equations},
              {"degree_sum", r.degree_sum},
              {"degree_condition", r.degree_condition},
              {"dimension_condition", r.dimension_condition},
              {"solutions", r.solutions},
              {"divisible", r.divisible},
              {"w", r.w ? to_json(*r.w) : Json(nullptr)}};
}

Json to_json(const SequencePlan& r) {
  return Json{{"j", r.j},
              {"l", r.l},
              {"a", r.a},
              {"g", r.g},
              {"s", r.s},
              {"d", r.d},
              {"multiplicity", r.multiplicity},
              {"stabilizer_of_l", r.stabilizer_of_l}};
}

Json to_json(const CascadeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"v", row.v},
           {"bias", row.bias.to_string()},
           {"lower_bound_log_p", row.lower_bound.log_p()},
           {"sorted", row.sorted},
           {"identity_holds", row.identity_holds},
           {"identity_with_multiplicity", row.identity_with_multiplicity},
           {"earlier", row.earlier}};
    if (row.plan) {
      j["plan"] = to_json(*row.plan);
      j["h_bias"] = row.h_bias.to_string();
      j["h_bias_at_least_c"] = row.h_bias_at_least_c;
    }
    if (row.permutation_of) j["permutation_of"] = *row.permutation_of;
    rows.push_back(j);
  }
  return Json{{"p", r.p},
              {"n", r.n},
              {"m", r.m},
              {"d", r.d},
              {"k", r.k},
              {"g", r.g},
              {"s", r.s},
              {"w", to_json(r.w)},
              {"search", to_json(r.search)},
              {"c", to_json(r.c)},
              {"rows", rows},
              {"first_rows_at_least_c", r.first_rows_at_least_c},
              {"all_identities_hold", r.all_identities_hold},
              {"bounds_consistent", r.bounds_consistent},
              {"block_dimension_condition", r.block_dimension_condition},
              {"reconstruction_exact", r.reconstruction_exact},
              {"hom_identity_exact", r.hom_identity_exact},
              {"bias_main", to_json(r.bias_main)},
              {"main_lower_bound_log_p", r.main_lower_bound.log_p()},
              {"bias_LQ", to_json(r.bias_LQ)},
              {"removal_inequality", r.removal_inequality},
              {"rank_res", r.rank_res},
              {"rank_over", r.rank_over},
              {"removal_inequality_ranks", r.removal_inequality_ranks}};
}

Json to_json(const DegreeLoweringReport& r) {
  return Json{{"Q_tilde", to_json(r.Q_tilde)},
              {"Q_tilde_text", r.Q_tilde.to_string()},
              {"degree", r.Q_tilde.degree()},
              {"correlation", r.correlation},
              {"recomputed", r.recomputed},
              {"measured_c", r.measured_c},
              {"bias_LQ", to_json(r.bias_LQ)},
              {"eps", r.eps},
              {"terms", r.terms},
              {"l1", r.l1},
              {"averaging_bound", r.averaging_bound},
              {"meets_averaging_bound", r.meets_averaging_bound},
              {"constant_slot", r.constant_slot}};
}

namespace {
Json construction_json(const MlConstruction& c) {
  Json translates = Json::array();
  for (const auto& t : c.translates) translates.push_back(points_json(t));
  Json j{{"z_size", c.z_size},
         {"u_size", c.u_size},
         {"m", c.m},
         {"s", c.s},
         {"levels_tried", c.levels_tried},
         {"draws", c.draws},
         {"stage1_bad_points", c.stage1_bad_points},
         {"proven_m_cap", c.proven_m_cap},
         {"proven_s_cap", c.proven_s_cap},
         {"coefficient", to_json(c.coefficient)},
         {"l1_exact", to_json(c.l1_exact)},
         {"term_bound_log2", c.term_bound_log2},
         {"grouped_l2_error", c.grouped_l2_error},
         {"translates", translates}};
  j["literal_l2_error"] = c.literal_l2_error ? Json(*c.literal_l2_error) : Json(nullptr);
  j["outer"] = c.outer ? to_json(*c.outer) : Json(nullptr);
  return j;
}
}  // namespace

Json to_json(const MlApproxResult& r, bool include_terms) {
  Json j{{"construction", construction_json(r.construction)},
         {"m", r.combination.m},
         {"l1", r.combination.l1},
         {"l2_error", r.combination.l2_error}};
  if (include_terms) j["combination"] = to_json(r.combination);
  return j;
}

Json to_json(const PolyApproxResult& r, bool include_terms) {
  Json j{{"construction", construction_json(r.construction)},
         {"diagonal_translate", points_json(r.diagonal_translate)},
         {"diagonal_error", r.diagonal_error},
         {"translates_searched", r.translates_searched},
         {"exhaustive_search", r.exhaustive_search},
         {"raw_terms", r.raw_terms},
         {"l1_exact", to_json(r.l1_exact)},
         {"q_prime", to_json(r.q_prime)},
         {"m", r.combination.m},
         {"l1", r.combination.l1},
         {"l2_error", r.combination.l2_error}};
  if (include_terms) j["combination"] = to_json(r.combination);
  return j;
}

Json to_json(const GowersInverseResult& r) {
  return Json{{"P", to_json(r.P)},
              {"P_text", r.P.to_string()},
              {"degree", r.P.degree()},
              {"correlation", r.correlation},
              {"gowers_norm", r.gowers_norm},
              {"m", r.m},
              {"l1", r.l1},
              {"approximation_error", r.approximation_error},
              {"meets_half_over_m", r.meets_half_over_m},
              {"meets_half_over_l1", r.meets_half_over_l1}};
}

Json to_json(const DecayTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"n", r.n}, {"max_abs_S", r.max_abs_S}, {"mean_abs_S", r.mean_abs_S}, {"evaluated", r.evaluated}});
  return Json{{"p", t.p}, {"k", t.k}, {"rows", rows}, {"slope", t.slope ? Json(*t.slope) : Json(nullptr)},
              {"monotone", t.monotone}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hoff::io
