#pragma once

#include <map>
#include <string>
#include <vector>

#include "attn/actions.hpp"
#include "attn/planner.hpp"

namespace attn {

/// Failure to read or validate a document. The message starts with the
/// location, e.g. "states.init.worlds[1].attention.i: ...".
class DocumentError : public Error {
 public:
  using Error::Error;
};

struct TaskSpec {
  std::string initial;
  std::vector<std::string> actions;
  Formula goal;
};

struct TaskDocument {
  SignaturePtr sig;
  std::map<std::string, AttentionState> states;
  std::map<std::string, ActionModelPtr> models;
  std::map<std::string, AttentionAction> actions;
  std::map<std::string, EpistemicAction> epistemic_actions;
  std::map<std::string, TaskSpec> tasks;

  const AttentionState& state(const std::string& name) const;
  const AttentionAction& action(const std::string& name) const;
  const EpistemicAction& epistemic_action(const std::string& name) const;
  PlanningTask task(const std::string& name) const;
};

TaskDocument parse_document(const std::string& text);
/// Throws DocumentError, also for I/O failures.
TaskDocument load_document(const std::string& path);

/// Loadable JSON text. Models are emitted under their own names; actions
/// whose model is not in doc.models get one named after the action.
std::string emit_document(const TaskDocument& doc);

/// Document holding just the signature and the given parts.
TaskDocument document_with_state(const std::string& name, const AttentionState& s);
TaskDocument document_with_action(const AttentionAction& x);
TaskDocument document_with_epistemic_action(const EpistemicAction& y);

}  // namespace attn
