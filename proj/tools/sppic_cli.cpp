// Command-line front end: one subcommand per pipeline stage.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sppic/sppic.hpp"

namespace {

using nlohmann::json;
using namespace sppic;

enum ExitCode { kOk = 0, kInput = 1, kVerify = 2, kBudget = 3, kInternal = 4 };

struct Options {
  std::string instance;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<unsigned long long> budget;
  std::string format = "json";
  std::string axiom = "all";
  std::string x_path;
  std::string solution_path;
  std::string cycles_path;
  bool symmetric = false;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw InputError("'" + path + "': syntax error at byte " + std::to_string(err.byte));
  }
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + opt.out + "'");
  f << text;
}

void emit_json(const Options& opt, const json& doc) { emit(opt, doc.dump(2) + "\n"); }

void require_format(const Options& opt, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (opt.format == f) return;
  throw InputError("--format " + opt.format + " is not available for this command");
}

// The instance a bipartite stage works on: the file itself, or its
// symmetrization when --symmetric is given.
struct Target {
  Instance base;
  std::optional<SymmetricInstance> sym;
  const Instance& inst() const { return sym ? sym->sym() : base; }
};

Target load_target(const Options& opt) {
  Target t{parse_instance(read_text(opt.instance)), std::nullopt};
  if (opt.symmetric) t.sym.emplace(t.base);
  return t;
}

int cmd_check_axioms(const Options& opt) {
  require_format(opt, {"json"});
  Instance inst = parse_instance(read_text(opt.instance));
  std::vector<Axiom> axioms;
  if (opt.axiom == "all")
    axioms = {Axiom::SUB, Axiom::MON, Axiom::CON, Axiom::GL};
  else
    axioms = {parse_axiom(opt.axiom)};
  unsigned long long budget = opt.budget.value_or(kDefaultAxiomBudget);
  json reports = json::array();
  bool all_hold = true;
  for (VertexIndex v = 0; v < inst.vertex_count(); ++v)
    for (Axiom a : axioms) {
      AxiomReport r = check_axiom(inst.oracle(v), a, budget);
      all_hold = all_hold && r.holds;
      reports.push_back(axiom_report_to_json(inst.oracle(v), r));
    }
  emit_json(opt, {{"holds", all_hold}, {"reports", reports}});
  return all_hold ? kOk : kVerify;
}

int cmd_bipartite_solve(const Options& opt) {
  require_format(opt, {"json"});
  Target t = load_target(opt);
  const Instance& inst = t.inst();
  EdgeVector lo = deferred_acceptance(inst, Side::W), hi = deferred_acceptance(inst, Side::F);
  emit_json(opt, {{"x_min", vector_to_json(inst, lo)}, {"x_max", vector_to_json(inst, hi)}});
  return kOk;
}

int cmd_rotations(const Options& opt) {
  require_format(opt, {"json"});
  Target t = load_target(opt);
  const Instance& inst = t.inst();
  EdgeVector x = opt.x_path.empty() ? deferred_acceptance(inst, Side::W)
                                    : vector_from_json(inst, read_json(opt.x_path));
  auto rotations = find_rotations(inst, x, opt.budget.value_or(kMaxRotationCandidates));
  json list = json::array();
  for (const auto& r : rotations) {
    json j = rotation_to_json(inst, r);
    j["max_weight"] = max_feasible_weight(inst, x, r);
    if (t.sym) j["singular"] = is_singular(*t.sym, r);
    list.push_back(j);
  }
  emit_json(opt, {{"x", vector_to_json(inst, x)}, {"rotations", list}});
  return kOk;
}

int cmd_route(const Options& opt) {
  require_format(opt, {"json"});
  Target t = load_target(opt);
  emit_json(opt, route_to_json(t.inst(), build_full_route(t.inst(), opt.seed)));
  return kOk;
}

int cmd_poset(const Options& opt) {
  require_format(opt, {"json", "csv", "dot"});
  Target t = load_target(opt);
  RotationOrder order = rotation_order(t.inst(), opt.budget.value_or(kDefaultStateBudget));
  if (opt.format == "csv")
    emit(opt, poset_to_csv(t.inst(), order));
  else if (opt.format == "dot")
    emit(opt, poset_to_dot(t.inst(), order));
  else
    emit_json(opt, poset_to_json(t.inst(), order));
  return kOk;
}

int cmd_solve(const Options& opt) {
  require_format(opt, {"json"});
  Instance inst = parse_instance(read_text(opt.instance));
  emit_json(opt, solution_to_json(inst, solve(inst, opt.seed)));
  return kOk;
}

int cmd_verify(const Options& opt) {
  require_format(opt, {"json"});
  Instance inst = parse_instance(read_text(opt.instance));
  HalfPartnership hp;
  if (!opt.solution_path.empty()) {
    if (!opt.x_path.empty() || !opt.cycles_path.empty())
      throw InputError("give either --solution or --x/--cycles, not both");
    json doc = read_json(opt.solution_path);
    if (!doc.is_object() || !doc.contains("x")) throw InputError("solution document needs 'x'");
    hp.x = vector_from_json(inst, doc["x"]);
    if (doc.contains("K")) hp.K = cycles_from_json(inst, doc["K"]);
  } else {
    if (opt.x_path.empty()) throw InputError("verify needs --solution or --x");
    hp.x = vector_from_json(inst, read_json(opt.x_path));
    if (!opt.cycles_path.empty()) hp.K = cycles_from_json(inst, read_json(opt.cycles_path));
  }
  VerificationReport rep = verify_half_partnership(inst, hp);
  json doc = report_to_json(inst, rep);
  doc["stable_partnership"] = rep.ok && hp.K.empty();
  emit_json(opt, doc);
  return rep.ok ? kOk : kVerify;
}

int cmd_brute(const Options& opt) {
  require_format(opt, {"json", "csv"});
  Instance inst = parse_instance(read_text(opt.instance));
  EnumerationBudget budget;
  if (opt.budget) budget.max_box = *opt.budget;
  EnumerationMode mode = inst.has_bipartition() ? EnumerationMode::bipartite : EnumerationMode::partnership;
  auto stable_set = enumerate_stable(inst, mode, budget);
  if (opt.format == "csv") {
    emit(opt, stable_set_to_csv(inst, stable_set));
    return kOk;
  }
  json list = json::array();
  for (const auto& x : stable_set) list.push_back(vector_to_json(inst, x));
  json doc{{"count", stable_set.size()}, {"stable", list}};
  if (inst.has_bipartition() && !stable_set.empty()) {
    auto ext = lattice_extremes(inst, stable_set);
    doc["x_min"] = vector_to_json(inst, ext.min);
    doc["x_max"] = vector_to_json(inst, ext.max);
    json hasse = json::array();
    for (auto [i, j] : stable_hasse_edges(inst, stable_set)) hasse.push_back({i, j});
    doc["hasse"] = hasse;
  }
  emit_json(opt, doc);
  return kOk;
}

int report_error(const Options& opt, int code, const std::string& message) {
  if (opt.format == "json")
    std::cerr << json{{"error", message}, {"exit_code", code}}.dump() << "\n";
  else
    std::cerr << "error: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable partnerships with integer choice functions"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--instance", opt.instance, "instance document")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "write the output document here instead of stdout");
    sub->add_option("--seed", opt.seed, "tie-break seed; 0 takes canonical order");
    sub->add_option("--budget", opt.budget, "work budget of the command");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "csv", "dot"}));
  };
  auto symmetric_flag = [&](CLI::App* sub) {
    sub->add_flag("--symmetric", opt.symmetric, "operate on the symmetrized instance");
  };

  auto* check = app.add_subcommand("check-axioms", "exhaustive axiom checks per vertex");
  common(check);
  check->add_option("--axiom", opt.axiom, "sub, mon, con, gl or all")
      ->check(CLI::IsMember({"sub", "mon", "con", "gl", "all", "SUB", "MON", "CON", "GL"}));
  auto* bsolve = app.add_subcommand("bipartite-solve", "lattice extremes by deferred acceptance");
  common(bsolve);
  symmetric_flag(bsolve);
  auto* rots = app.add_subcommand("rotations", "rotations applicable to a stable vector");
  common(rots);
  symmetric_flag(rots);
  rots->add_option("--x", opt.x_path, "edge-vector document (default x_min)");
  auto* route = app.add_subcommand("route", "full principal route");
  common(route);
  symmetric_flag(route);
  auto* poset = app.add_subcommand("poset", "rotation occurrences and their order");
  common(poset);
  symmetric_flag(poset);
  auto* solve_cmd = app.add_subcommand("solve", "stable half-partnership");
  common(solve_cmd);
  auto* verify = app.add_subcommand("verify", "check a half-partnership against the instance");
  common(verify);
  verify->add_option("--solution", opt.solution_path, "solution document with x and K");
  verify->add_option("--x", opt.x_path, "edge-vector document");
  verify->add_option("--cycles", opt.cycles_path, "list of cycles, each a vertex/edge walk");
  auto* brute = app.add_subcommand("brute", "enumerate every stable vector");
  common(brute);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*check) return cmd_check_axioms(opt);
    if (*bsolve) return cmd_bipartite_solve(opt);
    if (*rots) return cmd_rotations(opt);
    if (*route) return cmd_route(opt);
    if (*poset) return cmd_poset(opt);
    if (*solve_cmd) return cmd_solve(opt);
    if (*verify) return cmd_verify(opt);
    if (*brute) return cmd_brute(opt);
    return report_error(opt, kInternal, "no command dispatched");
  } catch (const InputError& e) {
    return report_error(opt, kInput, e.what());
  } catch (const VerificationError& e) {
    return report_error(opt, kVerify, e.what());
  } catch (const BudgetExceeded& e) {
    return report_error(opt, kBudget, e.what());
  } catch (const InternalError& e) {
    return report_error(opt, kInternal, e.what());
  } catch (const std::exception& e) {
    return report_error(opt, kInternal, e.what());
  }
}
