// Command-line front end. Every subcommand is a thin wrapper over one
// library entry point: it loads the referenced JSON files, runs the
// operation, and emits a report in either aligned text or "msl/1" JSON.
// Logical outcomes map to exit codes so shell pipelines can branch on
// them: 0 for a positive verdict, 1 for a negative one (inequivalent,
// not expressible, violation, nothing found), 2 for usage or input
// errors. Diagnostics go to standard error; reports are deterministic
// for fixed inputs and seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msl/bisim.hpp"
#include "msl/equiv.hpp"
#include "msl/families.hpp"
#include "msl/game.hpp"
#include "msl/json_io.hpp"
#include "msl/poset.hpp"
#include "msl/search.hpp"
#include "msl/translate.hpp"

namespace {

using namespace msl;
namespace fs = std::filesystem;

// ── shared option plumbing ─────────────────────────────────────────────────

struct Common {
  std::string format = "text";
  std::string out;  // report file; a directory for commands that emit files
  unsigned seed = 0;
  int jobs = 1;
  bool unsafe_large = false;

  Limits limits() const {
    return unsafe_large ? Limits::unlimited() : Limits{};
  }
};

void add_common(CLI::App* cmd, Common& c, bool out_is_dir = false) {
  cmd->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  if (out_is_dir)
    cmd->add_option("--out", c.out, "directory for emitted files")
        ->capture_default_str();
  else
    cmd->add_option("--out", c.out, "write the report to this file");
  cmd->add_option("--seed", c.seed, "random seed recorded for reproducibility");
  cmd->add_option("--jobs", c.jobs, "upper bound on worker parallelism")
      ->envname("MSL_JOBS")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--unsafe-large", c.unsafe_large,
                "lift the desk-scale size guards");
}

void emit(const Common& c, const ordered_json& report,
          const std::string& text) {
  std::string body = c.format == "json" ? report.dump(2) + "\n" : text;
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out);
  if (!f) fail("cannot write '" + c.out + "'");
  f << body;
}

// A formula argument is either literal syntax or a path to a file holding
// the syntax. Sugar (&, ->, <op>) is accepted everywhere.
Formula read_formula(const std::string& arg, const OperatorRegistry& reg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::string text(std::istreambuf_iterator<char>(in), {});
    return desugar(text, reg);
  }
  return desugar(arg, reg);
}

OperatorRegistry read_registry(const std::string& path) {
  return registry_from_json(load_json(path));
}

std::shared_ptr<KripkeModel> read_model(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  return model_from_json(load_json(path), stem.empty() ? "m" : stem);
}

std::string outcome_word(const SearchResult& r) {
  return r.kind == SearchResult::Kind::Found ? "found" : "none-up-to";
}

std::string two_decimals(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Left-aligned column layout for the experiment and embedding tables.
std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      if (i + 1 < row.size())
        out.append(width[i] - row[i].size(), ' ');
    }
    out += "\n";
  }
  return out;
}

ordered_json report_head(const std::string& command) {
  ordered_json j;
  j["schema"] = "msl/1";
  j["command"] = command;
  return j;
}

// ── check ──────────────────────────────────────────────────────────────────

struct CheckArgs {
  Common common;
  std::string model, point, formula, ops;
};

int run_check(const CheckArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  auto model = read_model(a.model);
  int w;
  if (!a.point.empty()) {
    w = model->world(a.point);
  } else {
    require(!model->points.empty(),
            "model lists no points; pass --point");
    w = model->points[0];
  }
  Formula f = read_formula(a.formula, reg);
  bool value = satisfies(*model, w, f, reg);

  ordered_json j = report_head("check");
  j["model"] = model->id;
  j["point"] = model->worlds[w];
  j["formula"] = print(f);
  j["value"] = value;
  emit(a.common, j, value ? "true\n" : "false\n");
  return value ? 0 : 1;
}

// ── equiv ──────────────────────────────────────────────────────────────────

struct EquivArgs {
  Common common;
  std::string a, b, ops;
  int branching = 3;
};

int run_equiv(const EquivArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  Formula fa = read_formula(a.a, reg);
  Formula fb = read_formula(a.b, reg);
  BoundedConfig cfg;
  cfg.branching = a.branching;
  EquivResult r = equivalent(fa, fb, reg, cfg);

  ordered_json j;
  j["schema"] = "msl/1";
  std::string text;
  int code = 1;
  switch (r.verdict) {
    case Verdict::Equivalent:
      j["verdict"] = "equivalent";
      text = "equivalent\n";
      code = 0;
      break;
    case Verdict::Inequivalent: {
      j["verdict"] = "inequivalent";
      j["route"] = r.route;
      KripkeModel cm = *r.countermodel->model;
      cm.points = {r.countermodel->world};
      j["countermodel"] = model_to_json(cm);
      text = "inequivalent\ncountermodel: world '" +
             r.countermodel->world_id() + "' of model '" + cm.id + "'\n";
      break;
    }
    case Verdict::UnknownWithinBounds:
      j["verdict"] = "unknown-within-bounds";
      j["route"] = r.route;
      j["branching"] = r.bounds.branching;
      j["max-worlds"] = r.bounds.max_worlds;
      text = "unknown within bounds (branching " +
             std::to_string(r.bounds.branching) + ")\n";
      break;
  }
  emit(a.common, j, text);
  return code;
}

// ── translate ──────────────────────────────────────────────────────────────

struct TranslateArgs {
  Common common;
  std::string formula, ops, mode, target;
};

int run_translate(const TranslateArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  Formula f = read_formula(a.formula, reg);
  Formula out;
  if (a.mode == "bool") {
    require(!a.target.empty(), "--mode bool needs --target REGISTRY");
    OperatorRegistry target = read_registry(a.target);
    out = translate_boolean_box(f, reg, target);
  } else {
    out = expand_language_box(f, reg);
  }

  ordered_json j = report_head("translate");
  j["mode"] = a.mode;
  j["input"] = print(f);
  j["output"] = print(out);
  j["input-size"] = f.size();
  j["output-size"] = out.size();
  emit(a.common, j, print(out) + "\n");
  return 0;
}

// ── decompose ──────────────────────────────────────────────────────────────

struct DecomposeArgs {
  Common common;
  std::string g, ops;
};

int run_decompose(const DecomposeArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  const OperatorSpec& g = reg.at(a.g);
  require(g.kind == OpKind::Bool, "decompose needs a boolean operator");
  std::vector<std::string> family_names;
  for (const auto& name : reg.names())
    if (name != a.g) family_names.push_back(name);
  OperatorRegistry family = subregistry(reg, family_names);

  ordered_json j = report_head("decompose");
  j["operator"] = a.g;
  auto s = is_disjunction_of(g.table, family);
  if (s) {
    j["expressible"] = true;
    j["parts"] = *s;
    std::string rhs;
    for (const auto& name : *s) {
      if (!rhs.empty()) rhs += " | ";
      rhs += name;
    }
    if (rhs.empty()) rhs = "(never true)";
    emit(a.common, j, "expressible: " + a.g + " = " + rhs + "\n");
    return 0;
  }

  std::string dir = a.common.out.empty() ? "out" : a.common.out;
  fs::create_directories(dir);
  CounterexamplePair pair = counterexample_models(reg, a.g);
  KripkeModel m1 = *pair.m1.model;
  m1.points = {pair.m1.world};
  KripkeModel m2 = *pair.m2.model;
  m2.points = {pair.m2.world};
  std::vector<std::string> files = {dir + "/counterexample_m1.json",
                                    dir + "/counterexample_m2.json",
                                    dir + "/counterexample_z.json"};
  save_json(files[0], model_to_json(m1));
  save_json(files[1], model_to_json(m2));
  save_json(files[2], relation_to_json(pair.z, m1, m2));

  j["expressible"] = false;
  j["files"] = files;
  std::string text = "not expressible; counterexample written to " + dir +
                     "/\n";
  // the report goes to stdout here; --out already names the directory
  std::string body = a.common.format == "json" ? j.dump(2) + "\n" : text;
  std::cout << body;
  return 1;
}

// ── bisim ──────────────────────────────────────────────────────────────────

struct BisimArgs {
  Common common;
  std::string m1, m2, relation, ops;
};

int run_bisim_check(const BisimArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  auto m1 = read_model(a.m1);
  auto m2 = read_model(a.m2);
  WorldRelation z = relation_from_json(load_json(a.relation), *m1, *m2);
  auto v = check_bisimulation(*m1, *m2, z, reg);

  ordered_json j = report_head("bisim-check");
  if (!v) {
    j["ok"] = true;
    emit(a.common, j, "ok\n");
    return 0;
  }
  j["ok"] = false;
  j["violation"] = v->describe(*m1, *m2);
  emit(a.common, j, v->describe(*m1, *m2) + "\n");
  return 1;
}

int run_bisim_greatest(const BisimArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  auto m1 = read_model(a.m1);
  auto m2 = read_model(a.m2);
  WorldRelation z = greatest_bisimulation(*m1, *m2, reg);
  ordered_json pairs = relation_to_json(z, *m1, *m2);

  ordered_json j = report_head("bisim-greatest");
  j["pairs"] = pairs;
  emit(a.common, j, pairs.dump(2) + "\n");
  return 0;
}

// ── fsg ────────────────────────────────────────────────────────────────────

struct FsgVerifyArgs {
  Common common;
  std::string tree, ops;
  std::vector<std::string> models;
};

int run_fsg_verify(const FsgVerifyArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  ModelStore store;
  for (const auto& path : a.models) {
    auto m = read_model(path);
    store[m->id] = m;
  }
  GameTree t{tree_from_json(load_json(a.tree), store), reg};
  auto v = verify_closed_tree(t);

  ordered_json j = report_head("fsg-verify");
  if (!v) {
    int n = node_count(t.root);
    j["ok"] = true;
    j["nodes"] = n;
    j["formula"] = print(formula_from_tree(t));
    emit(a.common, j,
         "closed tree verified: " + std::to_string(n) + " nodes\n");
    return 0;
  }
  j["ok"] = false;
  j["violation"] = {{"kind", v->kind},
                    {"where", v->where.empty() ? "root" : v->where},
                    {"detail", v->detail}};
  emit(a.common, j,
       "violation at '" + (v->where.empty() ? "root" : v->where) + "' (" +
           v->kind + "): " + v->detail + "\n");
  return 1;
}

struct FsgFromFormulaArgs {
  Common common;
  std::string formula, ops;
  std::vector<std::string> left, right;
};

ModelClass class_of_files(const std::vector<std::string>& paths) {
  ModelClass out;
  for (const auto& path : paths)
    for (const PointedModel& pm : points_of(read_model(path)))
      out.push_back(pm);
  return make_class(std::move(out));
}

int run_fsg_from_formula(const FsgFromFormulaArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  Formula f = read_formula(a.formula, reg);
  ModelClass ca = class_of_files(a.left);
  ModelClass cb = class_of_files(a.right);
  GameTree t = tree_from_formula(f, ca, cb, reg);
  ordered_json j = tree_to_json(t.root);
  // the tree itself is the report, so both formats emit the same JSON
  emit(a.common, j, j.dump(2) + "\n");
  return 0;
}

// ── models build ───────────────────────────────────────────────────────────

struct ModelsAlternationArgs {
  Common common;
  int ell = 1, i = 1;
};

int run_models_alternation(const ModelsAlternationArgs& a) {
  AlternationFamily fam =
      build_alternation_family(a.ell, a.i, a.common.limits());
  AlternationRegistries regs = build_alternation_registries({a.ell});
  std::string dir = a.common.out.empty() ? "out" : a.common.out;
  fs::create_directories(dir);

  std::vector<std::string> files;
  auto write_pointed = [&](const std::string& path, const PointedModel& pm) {
    KripkeModel m = *pm.model;
    m.points = {pm.world};
    save_json(path, model_to_json(m));
    files.push_back(path);
  };
  write_pointed(dir + "/alternation_A.json", fam.star_a);
  for (const auto& [word, pm] : fam.star_b)
    write_pointed(dir + "/alternation_B_" + word + ".json", pm);
  save_json(dir + "/ops_plain.json", registry_to_json(regs.plain));
  files.push_back(dir + "/ops_plain.json");
  save_json(dir + "/ops_plus.json", registry_to_json(regs.plus));
  files.push_back(dir + "/ops_plus.json");

  ordered_json j = report_head("models-build");
  j["kind"] = "alternation";
  j["ell"] = a.ell;
  j["i"] = a.i;
  j["files"] = files;
  std::string text = "wrote " + std::to_string(files.size()) + " files to " +
                     dir + "/\n";
  for (const auto& f : files) text += "  " + f + "\n";
  std::string body = a.common.format == "json" ? j.dump(2) + "\n" : text;
  std::cout << body;
  return 0;
}

struct ModelsSinglestepArgs {
  Common common;
  std::string ops, g;
  int i = 1;
};

int run_models_singlestep(const ModelsSinglestepArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  SingleStepFamily fam =
      build_singlestep_family(reg, a.g, a.i, a.common.limits());
  std::string dir = a.common.out.empty() ? "out" : a.common.out;
  fs::create_directories(dir);

  auto with_points = [&](const ModelClass& c) {
    KripkeModel m = *fam.universe;
    m.points.clear();
    for (const auto& pm : c) m.points.push_back(pm.world);
    return m;
  };
  std::vector<std::string> files = {dir + "/singlestep_a.json",
                                    dir + "/singlestep_b.json"};
  save_json(files[0], model_to_json(with_points(fam.class_a)));
  save_json(files[1], model_to_json(with_points(fam.class_b)));

  ordered_json j = report_head("models-build");
  j["kind"] = "singlestep";
  j["operator"] = a.g;
  j["i"] = a.i;
  j["t"] = fam.t;
  j["worlds"] = fam.universe->world_count();
  j["files"] = files;
  std::string text = "wrote " + std::to_string(files.size()) + " files to " +
                     dir + "/ (universe: " +
                     std::to_string(fam.universe->world_count()) +
                     " worlds, t=" + std::to_string(fam.t) + ")\n";
  for (const auto& f : files) text += "  " + f + "\n";
  std::string body = a.common.format == "json" ? j.dump(2) + "\n" : text;
  std::cout << body;
  return 0;
}

// ── poset embed ────────────────────────────────────────────────────────────

struct PosetArgs {
  Common common;
  std::string poset, kind;
};

std::string joined_set(const std::set<std::string>& s) {
  std::string out;
  for (const auto& e : s) {
    if (!out.empty()) out += ",";
    out += e;
  }
  return "{" + out + "}";
}

std::string joined_ints(const std::set<int>& s) {
  std::string out;
  for (int e : s) {
    if (!out.empty()) out += ",";
    out += std::to_string(e);
  }
  return "{" + out + "}";
}

int run_poset_embed(const PosetArgs& a) {
  Poset p = poset_from_json(load_json(a.poset));
  ordered_json j = report_head("poset-embed");
  j["kind"] = a.kind;
  ordered_json elems = ordered_json::array();
  std::vector<std::vector<std::string>> rows;

  if (a.kind == "bool") {
    SinglestepEmbedding em = embed_poset_singlestep(p, a.common.limits());
    j["arity"] = em.k;
    rows.push_back({"element", "code", "f", "g", "f-family", "g-family"});
    for (const auto& s : em.topo) {
      ordered_json e;
      e["element"] = s;
      e["code"] = em.code.at(s);
      e["f"] = em.f_name.at(s);
      e["g"] = em.g_name.at(s);
      e["f-family"] = em.f_family.at(s);
      e["g-family"] = em.g_family.at(s);
      elems.push_back(std::move(e));
      rows.push_back({s, std::to_string(em.code.at(s)), em.f_name.at(s),
                      em.g_name.at(s), joined_set(em.f_family.at(s)),
                      joined_set(em.g_family.at(s))});
    }
  } else {
    LanguageEmbedding em = embed_poset_languages(p, a.common.limits());
    rows.push_back({"element", "length", "index-set"});
    for (const auto& s : em.topo) {
      ordered_json e;
      e["element"] = s;
      e["length"] = em.index.at(s);
      e["index-set"] = em.index_sets.at(s);
      elems.push_back(std::move(e));
      rows.push_back({s, std::to_string(em.index.at(s)),
                      joined_ints(em.index_sets.at(s))});
    }
  }
  j["elements"] = std::move(elems);
  j["audit"] = "order matches family containment in both directions";
  std::string text = format_table(rows) +
                     "audit: order matches family containment in both "
                     "directions\n";
  emit(a.common, j, text);
  return 0;
}

// ── search min ─────────────────────────────────────────────────────────────

struct SearchArgs {
  Common common;
  std::string target, ops, target_ops;
  int max_size = 1, max_depth = 0;
  bool dedup = false, prune = false;
  std::vector<std::string> vars;
};

int run_search_min(const SearchArgs& a) {
  OperatorRegistry reg = read_registry(a.ops);
  OperatorRegistry full = a.target_ops.empty()
                              ? reg
                              : merge_registries(reg,
                                                 read_registry(a.target_ops));
  Formula target = read_formula(a.target, full);
  SizeBudget budget{a.max_size, a.max_depth > 0 ? a.max_depth : a.max_size};

  SearchOptions opt;
  opt.dedup = a.dedup;
  opt.prune_double_negation = a.prune;
  opt.variables = a.vars;
  if (!a.target_ops.empty()) opt.target_registry = full;
  SearchStats stats;
  opt.stats = &stats;
  SearchResult r = minimal_equivalent_size(target, reg, budget, opt);

  ordered_json j = report_head("search-min");
  j["target"] = print(target);
  j["max-size"] = budget.max_size;
  j["max-depth"] = budget.max_depth;
  j["outcome"] = outcome_word(r);
  if (r.kind == SearchResult::Kind::Found) {
    j["witness"] = print(*r.witness);
    j["size"] = r.size;
  } else {
    j["exhausted"] = r.size;
  }
  j["stats"] = {{"candidates", stats.candidates},
                {"exact-checks", stats.exact_checks},
                {"pool", stats.pool},
                {"restarts", stats.restarts}};
  if (r.kind == SearchResult::Kind::Found) {
    emit(a.common, j,
         "found: " + print(*r.witness) + " (size " + std::to_string(r.size) +
             ")\n");
    return 0;
  }
  emit(a.common, j, "none up to size " + std::to_string(r.size) + "\n");
  return 1;
}

// ── experiment ─────────────────────────────────────────────────────────────

struct ExperimentArgs {
  Common common;
  std::string ops, g, forbidden_in;
  int ell = 1, min_i = 1, i = 2;
  int max_size = 0, max_depth = 0;
};

int emit_experiment(const Common& common, const ExperimentReport& rep) {
  ordered_json j = report_head("experiment");
  j["kind"] = rep.kind;
  j["rich-logic"] = rep.rich_logic;
  j["poor-logic"] = rep.poor_logic;
  ordered_json rows = ordered_json::array();
  std::vector<std::vector<std::string>> table;
  table.push_back(
      {"i", "target", "rich-size", "poor-minimal", "bound", "bound-satisfied",
       "witness"});
  bool all = true;
  for (const auto& row : rep.rows) {
    ordered_json r;
    r["i"] = row.i;
    r["target"] = row.target_print;
    r["rich-size"] = row.rich_size;
    r["outcome"] = outcome_word(row.poor);
    r["size"] = row.poor.size;
    if (row.poor.witness) r["witness"] = print(*row.poor.witness);
    r["bound"] = two_decimals(row.bound);
    r["bound-satisfied"] = row.satisfied;
    rows.push_back(std::move(r));
    all = all && row.satisfied;
    table.push_back({std::to_string(row.i), row.target_print,
                     std::to_string(row.rich_size),
                     outcome_word(row.poor) + " " + std::to_string(row.poor.size),
                     two_decimals(row.bound), row.satisfied ? "true" : "false",
                     row.poor.witness ? print(*row.poor.witness) : "-"});
  }
  j["rows"] = std::move(rows);
  j["all-satisfied"] = all;
  std::string text = rep.kind + ": rich " + rep.rich_logic + ", poor " +
                     rep.poor_logic + "\n" + format_table(table) +
                     std::string("all bounds satisfied: ") +
                     (all ? "true" : "false") + "\n";
  emit(common, j, text);
  return all ? 0 : 1;
}

int run_experiment_singlestep(const ExperimentArgs& a) {
  SinglestepParams p;
  p.ops = read_registry(a.ops);
  p.g_name = a.g;
  p.min_i = a.min_i;
  p.max_i = a.i;
  int size = a.max_size > 0 ? a.max_size : 12;
  p.budget = {size, a.max_depth > 0 ? a.max_depth : size};
  p.search.dedup = true;
  p.search.prune_double_negation = true;
  return emit_experiment(a.common, succinctness_experiment(p));
}

int run_experiment_alternation(const ExperimentArgs& a) {
  AlternationParams p;
  p.ell = a.ell;
  ordered_json idx = load_json(a.forbidden_in);
  require(idx.is_array() && !idx.empty(),
          "the index-set file must be a nonempty JSON array of integers");
  for (const auto& e : idx) {
    require(e.is_number_integer(), "index-set entries must be integers");
    p.index_set.push_back(e.get<int>());
  }
  p.min_i = a.min_i;
  p.max_i = a.i;
  int size = a.max_size > 0 ? a.max_size : 14;
  p.budget = {size, a.max_depth > 0 ? a.max_depth : size};
  p.search.dedup = true;
  p.search.prune_double_negation = true;
  return emit_experiment(a.common, succinctness_experiment(p));
}

}  // namespace

// ── argument wiring ────────────────────────────────────────────────────────

int main(int argc, char** argv) {
  CLI::App app{"modal succinctness laboratory"};
  app.require_subcommand(1);
  std::function<int()> action;

  CheckArgs check_args;
  auto* check = app.add_subcommand(
      "check", "evaluate a formula at a world of a model");
  check->add_option("--model", check_args.model, "model file")->required();
  check->add_option("--point", check_args.point,
                    "world id (default: the model's first point)");
  check->add_option("--formula", check_args.formula, "formula text or file")
      ->required();
  check->add_option("--ops", check_args.ops, "operator registry file")
      ->required();
  add_common(check, check_args.common);
  check->callback([&] { action = [&] { return run_check(check_args); }; });

  EquivArgs equiv_args;
  auto* equiv = app.add_subcommand("equiv", "decide formula equivalence");
  equiv->add_option("--a", equiv_args.a, "first formula")->required();
  equiv->add_option("--b", equiv_args.b, "second formula")->required();
  equiv->add_option("--ops", equiv_args.ops, "operator registry file")
      ->required();
  equiv->add_option("--branching", equiv_args.branching,
                    "tree branching for the bounded route")
      ->capture_default_str();
  add_common(equiv, equiv_args.common);
  equiv->callback([&] { action = [&] { return run_equiv(equiv_args); }; });

  TranslateArgs translate_args;
  auto* translate = app.add_subcommand(
      "translate", "rewrite boxes into another operator vocabulary");
  translate->add_option("--formula", translate_args.formula,
                        "formula text or file")
      ->required();
  translate->add_option("--ops", translate_args.ops,
                        "operator registry file")
      ->required();
  translate
      ->add_option("--mode", translate_args.mode,
                   "bool: decompose boolean boxes over --target; "
                   "lang: expand language boxes into letter chains")
      ->check(CLI::IsMember({"bool", "lang"}))
      ->required();
  translate->add_option("--target", translate_args.target,
                        "target registry file (bool mode)");
  add_common(translate, translate_args.common);
  translate->callback(
      [&] { action = [&] { return run_translate(translate_args); }; });

  DecomposeArgs decompose_args;
  auto* decompose = app.add_subcommand(
      "decompose", "express an operator as a disjunction of others");
  decompose->add_option("--g", decompose_args.g, "operator name")->required();
  decompose->add_option("--ops", decompose_args.ops,
                        "registry with the operator and its candidates")
      ->required();
  add_common(decompose, decompose_args.common, /*out_is_dir=*/true);
  decompose->callback(
      [&] { action = [&] { return run_decompose(decompose_args); }; });

  BisimArgs bisim_args;
  auto* bisim = app.add_subcommand("bisim", "bisimulation tools");
  bisim->require_subcommand(1);
  auto* bisim_check =
      bisim->add_subcommand("check", "verify a relation is a bisimulation");
  bisim_check->add_option("--m1", bisim_args.m1, "first model file")
      ->required();
  bisim_check->add_option("--m2", bisim_args.m2, "second model file")
      ->required();
  bisim_check
      ->add_option("--relation", bisim_args.relation, "relation pair file")
      ->required();
  bisim_check->add_option("--ops", bisim_args.ops, "operator registry file")
      ->required();
  add_common(bisim_check, bisim_args.common);
  bisim_check->callback(
      [&] { action = [&] { return run_bisim_check(bisim_args); }; });
  auto* bisim_greatest = bisim->add_subcommand(
      "greatest", "compute the greatest bisimulation");
  bisim_greatest->add_option("--m1", bisim_args.m1, "first model file")
      ->required();
  bisim_greatest->add_option("--m2", bisim_args.m2, "second model file")
      ->required();
  bisim_greatest
      ->add_option("--ops", bisim_args.ops, "operator registry file")
      ->required();
  add_common(bisim_greatest, bisim_args.common);
  bisim_greatest->callback(
      [&] { action = [&] { return run_bisim_greatest(bisim_args); }; });

  FsgVerifyArgs fsg_verify_args;
  FsgFromFormulaArgs fsg_from_args;
  auto* fsg = app.add_subcommand("fsg", "formula-size game tools");
  fsg->require_subcommand(1);
  auto* fsg_verify =
      fsg->add_subcommand("verify", "check a game tree is closed and legal");
  fsg_verify->add_option("--tree", fsg_verify_args.tree, "game tree file")
      ->required();
  fsg_verify->add_option("--ops", fsg_verify_args.ops,
                         "operator registry file")
      ->required();
  fsg_verify
      ->add_option("--models", fsg_verify_args.models,
                   "model files referenced by the tree")
      ->required()
      ->expected(-1);
  add_common(fsg_verify, fsg_verify_args.common);
  fsg_verify->callback(
      [&] { action = [&] { return run_fsg_verify(fsg_verify_args); }; });
  auto* fsg_from = fsg->add_subcommand(
      "from-formula", "build the canonical tree of a separating formula");
  fsg_from->add_option("--formula", fsg_from_args.formula,
                       "formula text or file")
      ->required();
  fsg_from->add_option("--ops", fsg_from_args.ops, "operator registry file")
      ->required();
  fsg_from
      ->add_option("--left", fsg_from_args.left,
                   "model files whose points satisfy the formula")
      ->required()
      ->expected(-1);
  fsg_from
      ->add_option("--right", fsg_from_args.right,
                   "model files whose points falsify the formula")
      ->required()
      ->expected(-1);
  add_common(fsg_from, fsg_from_args.common);
  fsg_from->callback(
      [&] { action = [&] { return run_fsg_from_formula(fsg_from_args); }; });

  ModelsAlternationArgs models_alt_args;
  ModelsSinglestepArgs models_ss_args;
  auto* models = app.add_subcommand("models", "family construction tools");
  models->require_subcommand(1);
  auto* models_build = models->add_subcommand("build", "build a model family");
  models_build->require_subcommand(1);
  auto* models_alt = models_build->add_subcommand(
      "alternation", "star models separating an iterated alternation box");
  models_alt->add_option("--ell", models_alt_args.ell, "alternation length")
      ->required();
  models_alt->add_option("--i", models_alt_args.i, "iteration count")
      ->required();
  add_common(models_alt, models_alt_args.common, /*out_is_dir=*/true);
  models_alt->callback(
      [&] { action = [&] { return run_models_alternation(models_alt_args); }; });
  auto* models_ss = models_build->add_subcommand(
      "singlestep", "combined universe separating an iterated boolean box");
  models_ss->add_option("--ops", models_ss_args.ops,
                        "registry with the target and family operators")
      ->required();
  models_ss->add_option("--g", models_ss_args.g, "target operator name")
      ->required();
  models_ss->add_option("--i", models_ss_args.i, "iteration count")
      ->required();
  add_common(models_ss, models_ss_args.common, /*out_is_dir=*/true);
  models_ss->callback(
      [&] { action = [&] { return run_models_singlestep(models_ss_args); }; });

  PosetArgs poset_args;
  auto* poset = app.add_subcommand("poset", "partial-order embedding tools");
  poset->require_subcommand(1);
  auto* poset_embed = poset->add_subcommand(
      "embed", "embed a poset into operator families");
  poset_embed->add_option("--poset", poset_args.poset, "poset file")
      ->required();
  poset_embed
      ->add_option("--kind", poset_args.kind,
                   "bool: boolean operator families; lang: alternation "
                   "index sets")
      ->check(CLI::IsMember({"bool", "lang"}))
      ->required();
  add_common(poset_embed, poset_args.common);
  poset_embed->callback(
      [&] { action = [&] { return run_poset_embed(poset_args); }; });

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "minimal-formula search");
  search->require_subcommand(1);
  auto* search_min = search->add_subcommand(
      "min", "smallest formula equivalent to a target");
  search_min->add_option("--target", search_args.target,
                         "target formula text or file")
      ->required();
  search_min->add_option("--ops", search_args.ops,
                         "candidate operator registry file")
      ->required();
  search_min->add_option("--target-ops", search_args.target_ops,
                         "extra registry for operators only the target uses");
  search_min->add_option("--max-size", search_args.max_size, "size budget")
      ->required()
      ->check(CLI::PositiveNumber);
  search_min->add_option("--max-depth", search_args.max_depth,
                         "depth budget (default: the size budget)");
  search_min->add_flag("--dedup", search_args.dedup,
                       "collapse candidates with equal pool behavior");
  search_min->add_flag("--prune-double-negation", search_args.prune,
                       "skip candidates with a double negation");
  search_min->add_option("--vars", search_args.vars,
                         "candidate variables (default: the target's)");
  add_common(search_min, search_args.common);
  search_min->callback(
      [&] { action = [&] { return run_search_min(search_args); }; });

  ExperimentArgs exp_args;
  auto* experiment =
      app.add_subcommand("experiment", "succinctness bound presets");
  experiment->require_subcommand(1);
  auto* exp_ss = experiment->add_subcommand(
      "singlestep", "iterated boolean box against its decomposition family");
  exp_ss->add_option("--ops", exp_args.ops,
                     "registry with the target and family operators")
      ->required();
  exp_ss->add_option("--g", exp_args.g, "target operator name")->required();
  exp_ss->add_option("--min-i", exp_args.min_i, "first iteration count")
      ->capture_default_str();
  exp_ss->add_option("--i", exp_args.i, "last iteration count")
      ->capture_default_str();
  exp_ss->add_option("--max-size", exp_args.max_size,
                     "search size budget (default 12)");
  exp_ss->add_option("--max-depth", exp_args.max_depth,
                     "search depth budget (default: the size budget)");
  add_common(exp_ss, exp_args.common);
  exp_ss->callback(
      [&] { action = [&] { return run_experiment_singlestep(exp_args); }; });
  auto* exp_alt = experiment->add_subcommand(
      "alternation", "iterated alternation box against other lengths");
  exp_alt->add_option("--ell", exp_args.ell, "alternation length of the target")
      ->required();
  exp_alt->add_option("--forbidden-in", exp_args.forbidden_in,
                      "JSON array of the lengths available to the search")
      ->required();
  exp_alt->add_option("--min-i", exp_args.min_i, "first iteration count")
      ->capture_default_str();
  exp_alt->add_option("--i", exp_args.i, "last iteration count")
      ->capture_default_str();
  exp_alt->add_option("--max-size", exp_args.max_size,
                      "search size budget (default 14)");
  exp_alt->add_option("--max-depth", exp_args.max_depth,
                      "search depth budget (default: the size budget)");
  add_common(exp_alt, exp_args.common);
  exp_alt->callback(
      [&] { action = [&] { return run_experiment_alternation(exp_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
