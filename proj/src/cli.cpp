#include "attn/cli.hpp"

#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "attn/bisim.hpp"
#include "attn/document.hpp"
#include "attn/dot.hpp"
#include "attn/emulate.hpp"
#include "attn/planner.hpp"

namespace attn {

namespace {

struct Options {
  std::string task;
  std::string name;
  std::vector<std::string> states;
  std::string formula;
  std::vector<std::string> actions;
  std::optional<std::size_t> max_depth;
  bool nfl = false;
  bool relaxed_nfl = false;
  bool serial = false;
  bool contract_result = false;
  std::string emit = "text";
  std::string direction = "to-post";
};

/// Raised for outcomes that map to exit code 1.
struct Negative {
  std::string message;
};

void emit_state(const std::string& name, const AttentionState& s, const Options& o, std::ostream& out) {
  if (o.emit == "dot") {
    out << export_dot(s);
  } else {
    out << emit_document(document_with_state(name, s));
  }
}

const AttentionState& one_state(const TaskDocument& doc, const Options& o) {
  if (o.states.size() != 1) throw ValidationError("expected exactly one --state");
  return doc.state(o.states.front());
}

std::vector<std::string> split_actions(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

int cmd_validate(const TaskDocument& doc, std::ostream& out) {
  for (const auto& [name, x] : doc.actions) {
    for (const auto& w : validate_action(x).warnings) out << "warning: action '" << name << "': " << w << "\n";
  }
  for (const auto& [name, y] : doc.epistemic_actions) {
    for (const auto& w : validate_action(y).warnings) out << "warning: epistemic action '" << name << "': " << w << "\n";
  }
  out << "ok: " << doc.states.size() << " states, " << doc.models.size() << " models, " << doc.actions.size()
      << " actions, " << doc.epistemic_actions.size() << " epistemic actions, " << doc.tasks.size() << " tasks\n";
  return 0;
}

int cmd_check(const TaskDocument& doc, const Options& o, std::ostream& out) {
  const AttentionState& s = one_state(doc, o);
  const bool holds = check(s, parse_formula(o.formula, *doc.sig));
  out << (holds ? "true" : "false") << "\n";
  return holds ? 0 : 1;
}

int cmd_update(const TaskDocument& doc, const Options& o, std::ostream& out) {
  const AttentionState& s = one_state(doc, o);
  std::vector<AttentionAction> seq;
  for (const auto& name : split_actions(o.actions)) seq.push_back(doc.action(name));
  AttentionState result;
  try {
    result = apply_sequence(s, seq);
  } catch (const NotApplicable& e) {
    throw Negative{e.what()};
  }
  if (o.contract_result) result = contract(result);
  emit_state("result", result, o, out);
  return 0;
}

int cmd_contract(const TaskDocument& doc, const Options& o, std::ostream& out) {
  emit_state("contracted", contract(one_state(doc, o)), o, out);
  return 0;
}

int cmd_bisim(const TaskDocument& doc, const Options& o, std::ostream& out) {
  if (o.states.size() != 2) throw ValidationError("bisim needs --state twice");
  const AttentionState& a = doc.state(o.states[0]);
  const AttentionState& b = doc.state(o.states[1]);
  auto z = bisimilar(a, b);
  if (!z) {
    out << "not bisimilar\n";
    return 1;
  }
  out << "bisimilar\n";
  for (auto [u, v] : z->pairs) out << a.worlds[u] << " " << b.worlds[v] << "\n";
  return 0;
}

int cmd_emulate(const TaskDocument& doc, const Options& o, std::ostream& out) {
  if (o.direction == "to-post") {
    out << emit_document(document_with_epistemic_action(to_post(doc.action(o.name))));
  } else {
    out << emit_document(document_with_action(from_nopost(doc.epistemic_action(o.name))));
  }
  return 0;
}

int cmd_plan(const TaskDocument& doc, const Options& o, std::ostream& out) {
  const PlanningTask t = doc.task(o.name);
  const bool parallel = !o.serial;
  PlanResult r;
  if (o.max_depth) {
    r = solve_bounded(t, *o.max_depth, parallel);
  } else {
    r = solve_nfl(t, o.relaxed_nfl ? NflMode::Relaxed : NflMode::Strict, parallel);
  }
  switch (r.status) {
    case PlanStatus::NoneWithinBound:
      out << "none within bound\n";
      return 1;
    case PlanStatus::NoSolution:
      out << "no solution\n";
      return 1;
    case PlanStatus::Solved:
      break;
  }
  const Solution& sol = *r.solution;
  out << "plan of length " << sol.plan.size() << "\n";
  for (std::size_t k = 0; k < sol.plan.size(); ++k) out << "  " << k + 1 << ". " << sol.plan[k] << "\n";
  if (o.emit == "dot") {
    for (const auto& s : sol.trace) out << export_dot(s);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Epistemic planning with attention as a bounded resource"};
  app.require_subcommand(1);
  Options o;

  auto add_task = [&](CLI::App* sub) { sub->add_option("--task", o.task, "Task document (JSON)")->required(); };
  auto add_emit = [&](CLI::App* sub) {
    sub->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"dot", "text"}));
  };

  auto* validate_cmd = app.add_subcommand("validate", "Load and validate a document");
  add_task(validate_cmd);

  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at a state's actual world");
  add_task(check_cmd);
  check_cmd->add_option("--state", o.states, "State name")->required();
  check_cmd->add_option("--formula", o.formula, "Formula")->required();

  auto* update_cmd = app.add_subcommand("update", "Apply a sequence of attention actions");
  add_task(update_cmd);
  update_cmd->add_option("--state", o.states, "State name")->required();
  update_cmd->add_option("--actions", o.actions, "Action names, comma separated")->required();
  update_cmd->add_flag("--contract", o.contract_result, "Contract the result");
  add_emit(update_cmd);

  auto* contract_cmd = app.add_subcommand("contract", "Bisimulation contraction of a state");
  add_task(contract_cmd);
  contract_cmd->add_option("--state", o.states, "State name")->required();
  add_emit(contract_cmd);

  auto* bisim_cmd = app.add_subcommand("bisim", "Decide bisimilarity of two states");
  add_task(bisim_cmd);
  bisim_cmd->add_option("--state", o.states, "State names (twice)")->required();

  auto* emulate_cmd = app.add_subcommand("emulate", "Translate between attention and epistemic actions");
  add_task(emulate_cmd);
  emulate_cmd->add_option("--name", o.name, "Action name")->required();
  emulate_cmd->add_option("--direction", o.direction, "to-post or from-nopost")
      ->check(CLI::IsMember({"to-post", "from-nopost"}));
  emulate_cmd->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"text"}));

  auto* plan_cmd = app.add_subcommand("plan", "Search for a plan");
  add_task(plan_cmd);
  plan_cmd->add_option("--name", o.name, "Task name")->required();
  plan_cmd->add_option("--max-depth", o.max_depth, "Bound the plan length");
  auto* strict = plan_cmd->add_flag("--nfl", o.nfl, "Require NFL actions (default)");
  plan_cmd->add_flag("--relaxed-nfl", o.relaxed_nfl, "Accept actions with Q ∪ Q* total")->excludes(strict);
  plan_cmd->add_flag("--serial", o.serial, "Expand the search frontier serially");
  add_emit(plan_cmd);

  auto* render_cmd = app.add_subcommand("render", "Render a state as DOT");
  add_task(render_cmd);
  render_cmd->add_option("--state", o.states, "State name")->required();

  std::vector<const char*> argv{"attnplan"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const TaskDocument doc = load_document(o.task);
    if (validate_cmd->parsed()) return cmd_validate(doc, out);
    if (check_cmd->parsed()) return cmd_check(doc, o, out);
    if (update_cmd->parsed()) return cmd_update(doc, o, out);
    if (contract_cmd->parsed()) return cmd_contract(doc, o, out);
    if (bisim_cmd->parsed()) return cmd_bisim(doc, o, out);
    if (emulate_cmd->parsed()) return cmd_emulate(doc, o, out);
    if (plan_cmd->parsed()) return cmd_plan(doc, o, out);
    if (render_cmd->parsed()) {
      o.emit = "dot";
      emit_state(o.states.empty() ? "" : o.states.front(), one_state(doc, o), o, out);
      return 0;
    }
  } catch (const Negative& n) {
    err << n.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace attn
