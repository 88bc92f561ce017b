#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attn/actions.hpp"

namespace attn {

class NotNfl : public Error {
 public:
  explicit NotNfl(const std::string& action) : Error("action '" + action + "' is not NFL"), action_(action) {}
  const std::string& action() const noexcept { return action_; }

 private:
  std::string action_;
};

struct PlanningTask {
  AttentionState initial;
  std::vector<AttentionAction> actions;
  Formula goal;
};

/// Throws ValidationError when names collide, formulas do not validate or
/// the signatures differ.
void validate_task(const PlanningTask& t);

struct Solution {
  std::vector<std::string> plan;
  /// Contracted states, starting with the initial one; plan.size() + 1 long.
  std::vector<AttentionState> trace;
};

enum class PlanStatus { Solved, NoSolution, NoneWithinBound };

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t pruned = 0;
  std::size_t depth = 0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoSolution;
  std::optional<Solution> solution;
  SearchStats stats;
};

enum class NflMode { Strict, Relaxed, Unchecked };

struct SearchOptions {
  /// Discard successors bisimilar to an already visited state.
  bool prune = true;
  /// Expand each BFS layer with OpenMP.
  bool parallel = true;
  /// Layer limit; unlimited when empty.
  std::optional<std::size_t> max_depth;
};

/// Breadth-first search over contracted states. Actions are tried in name
/// order, so the reported plan is the shortest one and, among those, the
/// lexicographically least sequence of names. Every solution is replayed
/// before it is returned.
PlanResult search(const PlanningTask& t, const SearchOptions& options);

/// Complete search for NFL tasks. Throws NotNfl.
PlanResult solve_nfl(const PlanningTask& t, NflMode mode = NflMode::Strict, bool parallel = true);
/// Search limited to plans of at most max_depth actions.
PlanResult solve_bounded(const PlanningTask& t, std::size_t max_depth, bool parallel = true);

/// Replays a plan by name; true when every step applies and the goal holds.
bool replays(const PlanningTask& t, const std::vector<std::string>& plan);

}  // namespace attn
