#include "e2t/cli.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "e2t/effective.hpp"
#include "e2t/format.hpp"
#include "e2t/modelcat.hpp"
#include "json.hpp"

namespace e2t::cli {

namespace {

using Json = nlohmann::ordered_json;

/// Bad file, bad block or bad argument: exit 3.
class InputProblem : public Error {
 public:
  using Error::Error;
};

struct Report {
  std::string command;
  std::string input;
  std::optional<bool> holds;
  Json witnesses = Json::object();
  int failures = 0;
  std::optional<std::uint64_t> seed;
};

Report verdict(std::string command, std::string input, std::optional<bool> holds) {
  Report r;
  r.command = std::move(command);
  r.input = std::move(input);
  r.holds = holds;
  r.failures = holds == std::optional<bool>(false) ? 1 : 0;
  return r;
}

int exit_code(const Report& r) {
  if (!r.holds) return kInconclusive;
  return *r.holds ? kHolds : kFails;
}

Json to_json(const Report& r, long long elapsed_ms) {
  Json j;
  j["command"] = r.command;
  j["input"] = r.input;
  j["holds"] = r.holds ? Json(*r.holds) : Json(nullptr);
  j["witnesses"] = r.witnesses;
  j["failures"] = r.failures;
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

void print_text(std::ostream& out, const Report& r) {
  out << r.command << " " << r.input << ": " << (!r.holds ? "inconclusive" : *r.holds ? "holds" : "fails") << "\n";
  for (const auto& [key, value] : r.witnesses.items()) {
    if (value.is_string()) {
      std::string s = value.get<std::string>();
      if (s.find('\n') == std::string::npos) {
        out << "  " << key << ": " << s << "\n";
      } else {
        out << "  " << key << ":\n";
        std::istringstream lines(s);
        for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
      }
    } else {
      out << "  " << key << ": " << value.dump() << "\n";
    }
  }
}

// ---------------------------------------------------------------- loading

format::Document load(const std::string& path, const config::Budgets& b) {
  if (!std::filesystem::exists(path)) throw InputProblem("cannot read " + path);
  format::ParseOptions opts;
  opts.step_budget = b.step_budget;
  return format::parse_file(path, opts);
}

enum class Kind { Presheaf, Map, Groupoid, Functor };

const char* kind_label(Kind k) {
  switch (k) {
    case Kind::Presheaf: return "presheaf";
    case Kind::Map: return "map";
    case Kind::Groupoid: return "groupoid";
    case Kind::Functor: return "gfunctor";
  }
  return "?";
}

bool has_kind(const format::Value& v, Kind k) {
  switch (k) {
    case Kind::Presheaf: return std::holds_alternative<Presheaf>(v);
    case Kind::Map: return std::holds_alternative<NatTransf>(v);
    case Kind::Groupoid: return std::holds_alternative<GpdPresheaf>(v);
    case Kind::Functor: return std::holds_alternative<GpdFunctor>(v);
  }
  return false;
}

std::string kinds_text(const std::vector<Kind>& kinds) {
  std::string s;
  for (std::size_t i = 0; i < kinds.size(); ++i) s += (i ? " or " : "") + std::string(kind_label(kinds[i]));
  return s;
}

/// The named block, or the last own block of one of `kinds`.
const format::Block& target(const format::Document& doc, const std::string& name, const std::vector<Kind>& kinds) {
  auto fits = [&](const format::Block& b) {
    for (Kind k : kinds)
      if (has_kind(b.value, k)) return true;
    return false;
  };
  if (!name.empty()) {
    const format::Block* b = doc.find(name);
    if (!b) throw InputProblem("no block named " + name);
    if (!fits(*b)) throw InputProblem(name + " is a " + format::kind_name(b->value) + ", expected " + kinds_text(kinds));
    return *b;
  }
  for (auto it = doc.blocks.rbegin(); it != doc.blocks.rend(); ++it)
    if (fits(*it)) return *it;
  throw InputProblem("no " + kinds_text(kinds) + " block");
}

// ---------------------------------------------------------------- witnesses

Json element(const Presheaf& x, int obj, int e) {
  return Json{{"object", x.cat().object_name(obj)}, {"element", x.label(obj, e)}};
}

Json gpd_object(const GpdPresheaf& g, int p, int x) {
  return Json{{"stage", g.cat().object_name(p)}, {"object", g.stage(p).object_name(x)}};
}

Json stage_sizes(const Presheaf& x) {
  Json j = Json::object();
  for (int p = 0; p < x.cat().num_objects(); ++p) j[x.cat().object_name(p)] = x.size(p);
  return j;
}

Json stage_objects(const GpdPresheaf& g) {
  Json j = Json::object();
  for (int p = 0; p < g.cat().num_objects(); ++p) j[g.cat().object_name(p)] = g.stage(p).num_objects();
  return j;
}

Json coherence_json(const CoherenceReport& c, const GpdPresheaf& g) {
  Json j = Json::object();
  if (c.pseudo_compact) j["pseudo_compact"] = gpd_object(g, c.pseudo_compact->obj, c.pseudo_compact->elem);
  j["monic_compact"] = c.cond2.holds;
  j["diagonal_compact"] = c.cond3.holds;
  return j;
}

// ---------------------------------------------------------------- check

Report check_presheaf(const std::string& pred, const std::string& input, const Presheaf& x) {
  if (pred == "compact") {
    auto w = is_compact(x);
    Report r = verdict("check compact", input, w.has_value());
    if (w) r.witnesses["cover"] = element(x, w->obj, w->elem);
    return r;
  }
  if (pred == "coherent") {
    auto c = is_coherent_presheaf(x);
    Report r = verdict("check coherent", input, c.holds);
    if (c.witness) r.witnesses["cover"] = element(x, c.witness->obj, c.witness->elem);
    if (c.failing) r.witnesses["diagonal_fails_at"] = {{"object", x.cat().object_name(c.failing->first)}, {"index", c.failing->second}};
    return r;
  }
  if (pred == "ind-proj") {
    auto p = is_indecomposable_projective(x);
    Report r = verdict("check ind-proj", input, p.has_value());
    if (p) r.witnesses["represented_by"] = x.cat().object_name(*p);
    return r;
  }
  auto a = is_assembly_like(x);
  Report r = verdict("check assembly-like", input, a.has_value());
  if (a) {
    r.witnesses["cover"] = element(x, a->cover.obj, a->cover.elem);
    Json f = Json::array();
    for (int p : a->factors) f.push_back(x.cat().object_name(p));
    r.witnesses["factors"] = f;
  }
  return r;
}

Report check_map(const std::string& input, const NatTransf& m) {
  auto c = is_compact_map(m);
  Report r = verdict("check compact", input, c.holds);
  Json f = Json::array();
  for (auto [p, e] : c.failures) f.push_back(element(m.target(), p, e));
  if (!c.holds) r.witnesses["not_compact_over"] = f;
  return r;
}

Report check_groupoid(const std::string& pred, const std::string& input, const GpdPresheaf& g) {
  if (pred == "compact") {
    auto c = find_pseudo_compact_cover(g);
    Report r = verdict("check compact", input, c.has_value());
    if (c) r.witnesses["cover"] = gpd_object(g, c->obj, c->elem);
    return r;
  }
  if (pred == "coherent") {
    auto c = is_coherent_groupoid(g);
    Report r = verdict("check coherent", input, c.holds);
    r.witnesses = coherence_json(c, g);
    return r;
  }
  if (pred == "0-type") {
    auto z = is_0type(g);
    Report r = verdict("check 0-type", input, z.holds);
    if (!z.holds) r.witnesses["reason"] = z.weak.reason;
    if (z.weak.failing_stage) r.witnesses["stage"] = g.cat().object_name(*z.weak.failing_stage);
    return r;
  }
  return verdict("check eqrel", input, is_equivalence_relation_gpd(g));
}

Report check_functor(const std::string& pred, const std::string& input, const GpdFunctor& f) {
  SearchLimits limits;
  if (pred == "weak-equivalence") {
    auto w = is_weak_equivalence(f);
    Report r = verdict("check weak-equivalence", input, w.holds);
    if (!w.holds) r.witnesses["reason"] = w.reason;
    if (w.failing_stage) r.witnesses["stage"] = f.source().cat().object_name(*w.failing_stage);
    return r;
  }
  if (pred == "cofibration") return verdict("check cofibration", input, is_cofibration(f));
  if (pred == "discrete-fibration") return verdict("check discrete-fibration", input, is_discrete_fibration(f));
  if (pred == "isofibration") {
    auto i = is_isofibration(f, limits);
    std::optional<bool> holds;
    if (i.status != CleavageStatus::Inconclusive) holds = i.status == CleavageStatus::Cloven;
    Report r = verdict("check isofibration", input, holds);
    if (i.witness) r.witnesses["normal_cleavage"] = i.witness->normal;
    if (i.failure) {
      auto [p, x, phi] = *i.failure;
      r.witnesses["no_lift"] = {{"stage", f.source().cat().object_name(p)},
                                {"object", f.source().stage(p).object_name(x)},
                                {"arrow", f.target().stage(p).arrow(phi).name}};
    }
    return r;
  }
  auto q = find_quasi_inverse(f, limits);
  Report r = verdict("check equivalence", input, q.has_value());
  if (q) {
    format::Document doc;
    doc.add("F", f);
    doc.add("Finv", q->inverse);
    r.witnesses["quasi_inverse"] = format::emit(doc);
  }
  return r;
}

const std::vector<std::string>& predicates() {
  static const std::vector<std::string> p{"compact", "coherent", "ind-proj", "assembly-like", "0-type", "eqrel",
                                          "weak-equivalence", "cofibration", "isofibration", "discrete-fibration",
                                          "equivalence"};
  return p;
}

std::vector<Kind> kinds_for(const std::string& pred) {
  if (pred == "compact") return {Kind::Presheaf, Kind::Groupoid, Kind::Map};
  if (pred == "coherent") return {Kind::Presheaf, Kind::Groupoid};
  if (pred == "ind-proj" || pred == "assembly-like") return {Kind::Presheaf};
  if (pred == "0-type" || pred == "eqrel") return {Kind::Groupoid};
  return {Kind::Functor};
}

Report run_check(const std::string& pred, const std::string& file, const std::string& name, const config::Budgets& b) {
  auto doc = load(file, b);
  const auto& blk = target(doc, name, kinds_for(pred));
  Report r;
  if (auto* x = std::get_if<Presheaf>(&blk.value)) {
    r = check_presheaf(pred, file, *x);
  } else if (auto* m = std::get_if<NatTransf>(&blk.value)) {
    r = check_map(file, *m);
  } else if (auto* g = std::get_if<GpdPresheaf>(&blk.value)) {
    r = check_groupoid(pred, file, *g);
  } else {
    r = check_functor(pred, file, std::get<GpdFunctor>(blk.value));
  }
  r.witnesses["block"] = blk.name;
  return r;
}

// ---------------------------------------------------------------- other commands

Report run_factor(const std::string& kind, const std::string& file, const std::string& name, const config::Budgets& b) {
  auto doc = load(file, b);
  const auto& blk = target(doc, name, {Kind::Functor});
  const auto& f = std::get<GpdFunctor>(blk.value);
  bool trivcof = kind == "trivcof-fib";
  auto res = trivcof ? factor_trivcof_fib(f) : factor_cof_trivfib(f);
  bool ok = compose(res.right, res.left) == f && is_cofibration(res.left);
  Report r = verdict("factor", file, false);
  r.witnesses["block"] = blk.name;
  r.witnesses["kind"] = kind;
  r.witnesses["composite_matches"] = compose(res.right, res.left) == f;
  r.witnesses["left_cofibration"] = is_cofibration(res.left);
  if (trivcof) {
    bool eqv = res.left_equivalence && check_quasi_inverse(res.left, *res.left_equivalence);
    bool clv = res.cleavage && res.cleavage->check();
    r.witnesses["left_equivalence_certified"] = eqv;
    r.witnesses["right_cleavage_certified"] = clv;
    ok = ok && eqv && clv;
  } else {
    bool tf = res.trivfib && res.trivfib->check();
    r.witnesses["right_trivial_fibration_certified"] = tf;
    ok = ok && tf;
  }
  r.witnesses["middle_objects"] = stage_objects(res.middle);
  format::Document out;
  out.add("M", res.middle);
  out.add("left", res.left);
  out.add("right", res.right);
  r.witnesses["document"] = format::emit(out);
  r.holds = ok;
  r.failures = ok ? 0 : 1;
  return r;
}

Report run_discretize(const std::string& file, const std::string& name, const config::Budgets& b) {
  auto doc = load(file, b);
  const auto& blk = target(doc, name, {Kind::Groupoid});
  const auto& g = std::get<GpdPresheaf>(blk.value);
  try {
    auto d = discretize(g);
    bool ok = d.check();
    Report r = verdict("discretize", file, ok);
    r.witnesses["block"] = blk.name;
    r.witnesses["cover"] = gpd_object(g, d.strict.cover.obj, d.strict.cover.elem);
    r.witnesses["classes"] = stage_sizes(d.G);
    r.witnesses["kernel_pair"] = d.presentation.kernel_pair;
    r.witnesses["coequalizer"] = d.presentation.coequalizer;
    r.witnesses["weak_equivalence"] = d.certificate.weak;
    r.witnesses["strong_equivalence"] = d.certificate.strong;
    format::Document out;
    out.add("G", d.G);
    r.witnesses["document"] = format::emit(out);
    return r;
  } catch (const NotZeroType& e) {
    Report r = verdict("discretize", file, false);
    r.witnesses["block"] = blk.name;
    r.witnesses["reason"] = std::string("not a 0-type: ") + e.what();
    return r;
  } catch (const NotCoherent& e) {
    Report r = verdict("discretize", file, false);
    r.witnesses["block"] = blk.name;
    r.witnesses["reason"] = std::string("not coherent: ") + e.what();
    return r;
  }
}

Report run_classify(const std::string& file, const std::string& name, const config::Budgets& b) {
  auto doc = load(file, b);
  const auto& blk = target(doc, name, {Kind::Presheaf});
  const auto& x = std::get<Presheaf>(blk.value);
  auto c = classify(x);
  Report r = verdict("classify", file, c.chain_consistent());
  r.witnesses["block"] = blk.name;
  r.witnesses["ind_proj"] = c.is_ind_proj();
  r.witnesses["compact"] = c.is_compact();
  r.witnesses["coherent"] = c.is_coherent();
  r.witnesses["assembly_like"] = c.is_assembly_like();
  r.witnesses["lex_base"] = c.lex_base;
  if (c.indecomposable_projective) r.witnesses["represented_by"] = x.cat().object_name(*c.indecomposable_projective);
  if (c.compact) r.witnesses["cover"] = element(x, c.compact->obj, c.compact->elem);
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Report run_verify(const std::string& id, int count, std::uint64_t seed) {
  if (count < 0) throw InputProblem("--count must be non-negative");
  auto rep = verify_lemma(id, count, seed);
  Report r = verdict("verify", id, rep.failures == 0);
  r.failures = rep.failures;
  r.seed = seed;
  for (const auto& info : lemma_registry())
    if (info.id == id) r.witnesses["statement"] = info.statement;
  r.witnesses["instances"] = rep.instances;
  r.witnesses["inconclusive"] = rep.inconclusive;
  Json notes = Json::array();
  for (const auto& [i, o] : rep.notes) {
    Json n{{"instance", i}, {"verdict", verdict_name(o.verdict)}, {"detail", o.detail}};
    if (!o.dump.empty()) n["dump"] = o.dump;
    notes.push_back(n);
  }
  r.witnesses["notes"] = notes;
  return r;
}

Report run_pca_eval(const std::string& text, const config::Budgets& b) {
  auto t = pca::Term::parse(text);
  auto out = pca::reduce(t, b.step_budget);
  if (auto* n = std::get_if<pca::Normal>(&out)) {
    Report r = verdict("pca-eval", text, true);
    r.witnesses["normal_form"] = n->term.to_string();
    r.witnesses["steps"] = n->steps;
    return r;
  }
  Report r = verdict("pca-eval", text, std::nullopt);
  r.witnesses["timeout_after_steps"] = std::get<pca::Timeout>(out).steps;
  return r;
}

Report run_build_site(const std::string& file, const config::Budgets& b) {
  auto doc = load(file, b);
  std::vector<PartitionedAssembly> gens;
  for (const auto& blk : doc.blocks)
    if (auto* p = std::get_if<PartitionedAssembly>(&blk.value)) gens.push_back(*p);
  if (gens.empty()) throw InputProblem("no passembly block");
  try {
    auto site = build_site(gens, HomBudget{b.term_size, b.step_budget}, b.search_cap);
    const auto& c = *site.category;
    Report r = verdict("build-site", file, true);
    Json objs = Json::array();
    for (int p = 0; p < c.num_objects(); ++p) objs.push_back(c.object_name(p));
    r.witnesses["objects"] = objs;
    Json arrows = Json::array();
    for (int a = c.num_objects(); a < c.num_arrows(); ++a) {
      Json fn = Json::array();
      for (int v : site.functions[static_cast<std::size_t>(a)])
        fn.push_back(site.generators[static_cast<std::size_t>(c.cod(a))].carrier[static_cast<std::size_t>(v)]);
      arrows.push_back({{"name", c.arrow(a).name},
                        {"dom", c.object_name(c.dom(a))},
                        {"cod", c.object_name(c.cod(a))},
                        {"tracker", site.trackers[static_cast<std::size_t>(a)].to_string()},
                        {"function", fn}});
    }
    r.witnesses["arrows"] = arrows;
    return r;
  } catch (const SiteTooLarge& e) {
    Report r = verdict("build-site", file, std::nullopt);
    r.witnesses["reason"] = e.what();
    return r;
  }
}

std::vector<std::string> lemma_ids() {
  std::vector<std::string> ids;
  for (const auto& l : lemma_registry()) ids.push_back(l.id);
  return ids;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const config::Env& env) {
  CLI::App app{"Finite presheaves, groupoid presheaves and their exact completion.", "e2t"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  std::size_t step = 0, term = 0, cap = 0;
  app.add_flag("--json", json, "Print one JSON object");
  auto* step_opt = app.add_option("--step-budget", step, "Reduction step budget")->check(CLI::PositiveNumber);
  auto* term_opt = app.add_option("--term-size", term, "Tracker size bound")->check(CLI::PositiveNumber);
  auto* cap_opt = app.add_option("--search-cap", cap, "Site arrow cap")->check(CLI::PositiveNumber);

  std::string pred, file, name, kind, lemma, term_text;
  int count = 100;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "Decide a predicate on a block");
  check->add_option("predicate", pred)->required()->check(CLI::IsMember(predicates()));
  check->add_option("file", file)->required();
  check->add_option("--name", name, "Block to check (default: last applicable)");

  auto* factor = app.add_subcommand("factor", "Factor a groupoid functor");
  factor->add_option("--kind", kind)->required()->check(CLI::IsMember({"trivcof-fib", "cof-trivfib"}));
  factor->add_option("file", file)->required();
  factor->add_option("--name", name);

  auto* disc = app.add_subcommand("discretize", "Discretize a coherent 0-type");
  disc->add_option("file", file)->required();
  disc->add_option("--name", name);

  auto* cls = app.add_subcommand("classify", "Classify a presheaf");
  cls->add_option("file", file)->required();
  cls->add_option("--name", name);

  auto* ver = app.add_subcommand("verify", "Check a lemma on random instances");
  ver->add_option("lemma", lemma)->required();
  ver->add_option("--count", count, "Number of instances");
  ver->add_option("--seed", seed, "Seed");

  auto* eval = app.add_subcommand("pca-eval", "Reduce a combinator term");
  std::vector<std::string> term_words;
  eval->add_option("term", term_words, "Term, e.g. 'S K K S'")->required();

  auto* site = app.add_subcommand("build-site", "Build the site on the passembly blocks of a file");
  site->add_option("file", file)->required();

  std::vector<std::string> argv_store{"e2t"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "e2t: " << e.what() << "\n";
    return kInputError;
  }

  for (const auto& w : term_words) term_text += (term_text.empty() ? "" : " ") + w;
  std::string command = app.get_subcommands().front()->get_name();
  std::string input = command == "verify" ? lemma : command == "pca-eval" ? term_text : file;
  auto start = std::chrono::steady_clock::now();
  Report r;
  int code = kInputError;
  std::string error;
  try {
    config::Overrides o;
    if (step_opt->count()) o.step_budget = step;
    if (term_opt->count()) o.term_size = term;
    if (cap_opt->count()) o.search_cap = cap;
    auto budgets = config::resolve(o, env);
    if (command == "check") {
      r = run_check(pred, file, name, budgets);
    } else if (command == "factor") {
      r = run_factor(kind, file, name, budgets);
    } else if (command == "discretize") {
      r = run_discretize(file, name, budgets);
    } else if (command == "classify") {
      r = run_classify(file, name, budgets);
    } else if (command == "verify") {
      r = run_verify(lemma, count, seed);
    } else if (command == "pca-eval") {
      r = run_pca_eval(term_text, budgets);
    } else {
      r = run_build_site(file, budgets);
    }
    code = exit_code(r);
  } catch (const UnknownLemma& e) {
    error = std::string(e.what()) + " (known: " + CLI::detail::join(lemma_ids(), ", ") + ")";
  } catch (const SearchExhausted& e) {
    r = verdict(command, input, std::nullopt);
    r.witnesses["reason"] = e.what();
    code = kInconclusive;
  } catch (const gen::GenerationExhausted& e) {
    r = verdict(command, input, std::nullopt);
    r.witnesses["reason"] = e.what();
    code = kInconclusive;
  } catch (const Error& e) {
    error = e.what();
  }
  if (code == kInputError) {
    r = verdict(command, input, std::nullopt);
    r.witnesses["error"] = error;
    err << "e2t: " << error << "\n";
  }
  if (command == "verify") r.seed = seed;
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (json) {
    out << to_json(r, ms).dump() << "\n";
  } else if (code != kInputError) {
    print_text(out, r);
  }
  return code;
}

}  // namespace e2t::cli
