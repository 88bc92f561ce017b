#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attn/models.hpp"

namespace attn {

class NotApplicable : public Error {
 public:
  NotApplicable(std::string action, std::optional<std::size_t> step = std::nullopt);
  const std::string& action() const noexcept { return action_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::string action_;
  std::optional<std::size_t> step_;
};

/// The updated relation of some agent is not an equivalence relation.
class IllFormedResult : public Error {
 public:
  IllFormedResult(std::string agent, std::string u, std::string v, std::string w);
  IllFormedResult(std::string agent, const std::string& reason);
  const std::string& agent() const noexcept { return agent_; }

 private:
  std::string agent_;
};

class CostLookupMiss : public Error {
 public:
  CostLookupMiss(const std::string& agent, const Formula& question, const std::string& event);
};

struct CostEntry {
  Formula question;
  /// Component of Q_i ∪ Q*_i the entry is restricted to; all when empty.
  std::optional<std::size_t> component;
  unsigned cost = 0;
};

struct CostTable {
  std::vector<std::vector<CostEntry>> entries;        // [agent]
  std::vector<std::optional<unsigned>> agent_default;  // [agent]
  std::optional<unsigned> default_cost;

  /// Cost of asking `question` in the given component. T always costs 0.
  /// Component-restricted entries win over unrestricted ones, which win over
  /// the agent default, which wins over the global default.
  std::optional<unsigned> lookup(std::size_t agent, const Formula& question, std::size_t component) const;
  /// Per-agent default if present, else the global default.
  std::optional<unsigned> effective_default(std::size_t agent) const;

  static CostTable uniform(std::size_t agents, unsigned cost);
};

struct AttentionActionModel {
  SignaturePtr sig;
  std::vector<std::string> events;
  std::vector<Partition> q;      // [agent]
  std::vector<Partition> qstar;  // [agent]
  std::vector<Formula> pre;      // [event]
  CostTable costs;

  std::optional<std::size_t> event_index(std::string_view name) const;
  /// Components of Q_i ∪ Q*_i, which key the cost table.
  std::vector<Partition> components() const;
};

using ActionModelPtr = std::shared_ptr<const AttentionActionModel>;

struct AttentionAction {
  ActionModelPtr model;
  std::vector<Formula> questions;  // [agent]
  std::size_t actual = 0;
  std::string name;
};

/// Square boolean matrix over events.
class EventRelation {
 public:
  EventRelation() = default;
  explicit EventRelation(std::size_t n) : n_(n), bits_(n * n, 0) {}
  static EventRelation from_partition(const Partition& p);

  std::size_t size() const noexcept { return n_; }
  bool related(std::size_t a, std::size_t b) const { return bits_[a * n_ + b] != 0; }
  void set(std::size_t a, std::size_t b, bool v = true) { bits_[a * n_ + b] = v ? 1 : 0; }
  /// The partition when the relation is an equivalence.
  std::optional<Partition> as_partition() const;

  bool operator==(const EventRelation&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> bits_;
};

struct EpistemicAction {
  SignaturePtr sig;
  std::vector<std::string> events;
  std::vector<EventRelation> relations;  // [agent]
  std::vector<Formula> pre;              // [event]
  /// [event] -> (atom, new value) pairs; unlisted atoms keep their value.
  std::vector<std::vector<std::pair<Formula, Formula>>> post;
  /// Designated events. Exactly one must be applicable at the actual world.
  std::vector<std::size_t> actual;
  std::string name;

  std::optional<std::size_t> event_index(std::string_view name) const;
  /// Every postcondition maps its atom to itself.
  bool without_postconditions() const;
};

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const noexcept { return errors.empty(); }
};

Diagnostics validate_action(const AttentionAction& x);
Diagnostics validate_action(const EpistemicAction& x);

/// Q*_i total for every agent and every non-T question costs > 0.
bool is_nfl(const AttentionAction& x);
/// As is_nfl, but only requires Q_i ∪ Q*_i total.
bool is_nfl_relaxed(const AttentionAction& x);

bool applicable(const AttentionState& s, const AttentionAction& x);
/// Throws NotApplicable, IllFormedResult, CostLookupMiss, SignatureMismatch.
AttentionState attention_update(const AttentionState& s, const AttentionAction& x);
AttentionState apply_sequence(const AttentionState& s, const std::vector<AttentionAction>& xs);

/// Public announcement of the disjunction of all preconditions, questions T.
AttentionAction background_announcement(const AttentionAction& x);

/// Index of the designated event applicable at s.actual, if any. Throws
/// Error when several are.
std::optional<std::size_t> applicable_event(const EpistemicState& s, const EpistemicAction& y);
EpistemicState product_update(const EpistemicState& s, const EpistemicAction& y);

}  // namespace attn
