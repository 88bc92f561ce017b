#include "attn/planner.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "attn/bisim.hpp"

namespace attn {

void validate_task(const PlanningTask& t) {
  require_valid(t.initial);
  const Signature& sig = *t.initial.sig;
  validate(t.goal, sig);
  std::set<std::string> names;
  for (const auto& x : t.actions) {
    if (!names.insert(x.name).second) throw ValidationError("duplicate action name '" + x.name + "'");
    if (!x.model || !x.model->sig || !(*x.model->sig == sig)) throw SignatureMismatch();
    auto d = validate_action(x);
    if (!d.ok()) throw ValidationError("action '" + x.name + "': " + d.errors.front());
  }
}

namespace {

struct Node {
  AttentionState state;
  std::size_t parent = 0;
  std::size_t action = 0;  // index into the task's action list
  std::size_t depth = 0;
};

/// Cheap invariant of bisimulation contractions; equal for bisimilar
/// contracted states, since those are isomorphic.
std::size_t prefilter_key(const AttentionState& s) {
  // One row per world: valuation bits, then attention per agent.
  std::vector<std::vector<unsigned>> rows(s.world_count());
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    for (bool b : s.valuation[w]) rows[w].push_back(b ? 1u : 0u);
    for (const auto& att : s.attention) rows[w].push_back(att[w]);
  }
  std::sort(rows.begin(), rows.end());
  std::size_t h = s.world_count();
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& r : rows) {
    for (unsigned v : r) mix(v);
    mix(0xabcdef);
  }
  for (const auto& rel : s.relations) {
    std::vector<std::size_t> sizes(rel.block_count(), 0);
    for (std::size_t b : rel.labels()) ++sizes[b];
    std::sort(sizes.begin(), sizes.end());
    for (std::size_t n : sizes) mix(n);
    mix(0x5bd1e995);
  }
  return h;
}

struct Successor {
  bool applicable = false;
  AttentionState state;
  bool goal = false;
  std::size_t key = 0;
  std::exception_ptr error;
};

class Visited {
 public:
  /// True when s was new and has been recorded.
  bool insert(std::size_t key, std::size_t node, const std::vector<Node>& nodes) {
    auto& bucket = buckets_[key];
    for (std::size_t other : bucket) {
      if (bisimilar(nodes[other].state, nodes[node].state)) return false;
    }
    bucket.push_back(node);
    return true;
  }

 private:
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets_;
};

Solution build_solution(const PlanningTask& t, const std::vector<Node>& nodes, std::size_t last) {
  Solution sol;
  std::vector<std::size_t> path;
  for (std::size_t k = last; k != 0; k = nodes[k].parent) path.push_back(k);
  std::reverse(path.begin(), path.end());
  sol.trace.push_back(nodes[0].state);
  for (std::size_t k : path) {
    sol.plan.push_back(t.actions[nodes[k].action].name);
    sol.trace.push_back(nodes[k].state);
  }
  if (!replays(t, sol.plan)) throw std::logic_error("planner produced a plan that does not replay");
  return sol;
}

}  // namespace

bool replays(const PlanningTask& t, const std::vector<std::string>& plan) {
  std::vector<AttentionAction> seq;
  for (const auto& name : plan) {
    auto it = std::find_if(t.actions.begin(), t.actions.end(), [&](const auto& x) { return x.name == name; });
    if (it == t.actions.end()) return false;
    seq.push_back(*it);
  }
  try {
    return check(apply_sequence(t.initial, seq), t.goal);
  } catch (const NotApplicable&) {
    return false;
  } catch (const IllFormedResult&) {
    return false;
  }
}

PlanResult search(const PlanningTask& t, const SearchOptions& options) {
  validate_task(t);
  PlanResult result;
  std::vector<std::size_t> order(t.actions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t.actions[a].name < t.actions[b].name; });

  std::vector<Node> nodes;
  nodes.push_back({contract(t.initial), 0, 0, 0});
  if (check(nodes[0].state, t.goal)) {
    result.status = PlanStatus::Solved;
    result.solution = build_solution(t, nodes, 0);
    return result;
  }
  Visited visited;
  if (options.prune) visited.insert(prefilter_key(nodes[0].state), 0, nodes);

  std::vector<std::size_t> frontier{0};
  std::size_t depth = 0;
  while (!frontier.empty()) {
    if (options.max_depth && depth >= *options.max_depth) {
      result.status = PlanStatus::NoneWithinBound;
      return result;
    }
    ++depth;
    result.stats.depth = depth;
    const std::size_t width = order.size();
    std::vector<Successor> succ(frontier.size() * width);
    auto expand = [&](std::size_t slot) {
      Successor& out = succ[slot];
      const AttentionState& from = nodes[frontier[slot / width]].state;
      const AttentionAction& x = t.actions[order[slot % width]];
      try {
        if (!applicable(from, x)) return;
        out.state = contract(attention_update(from, x));
        out.applicable = true;
        out.goal = check(out.state, t.goal);
        out.key = prefilter_key(out.state);
      } catch (const IllFormedResult&) {
        // The update is undefined here; the sequence is not a plan.
      } catch (...) {
        out.error = std::current_exception();
      }
    };
    const auto total = static_cast<long>(succ.size());
    if (options.parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long k = 0; k < total; ++k) expand(static_cast<std::size_t>(k));
    } else {
      for (long k = 0; k < total; ++k) expand(static_cast<std::size_t>(k));
    }
    result.stats.expanded += frontier.size();

    // Serial pass in canonical order keeps the outcome independent of the
    // schedule above.
    std::vector<std::size_t> next;
    for (std::size_t slot = 0; slot < succ.size(); ++slot) {
      Successor& s = succ[slot];
      if (s.error) std::rethrow_exception(s.error);
      if (!s.applicable) continue;
      ++result.stats.generated;
      nodes.push_back({std::move(s.state), frontier[slot / width], order[slot % width], depth});
      const std::size_t id = nodes.size() - 1;
      if (s.goal) {
        result.status = PlanStatus::Solved;
        result.solution = build_solution(t, nodes, id);
        return result;
      }
      if (options.prune && !visited.insert(s.key, id, nodes)) {
        ++result.stats.pruned;
        nodes.pop_back();
        continue;
      }
      next.push_back(id);
    }
    frontier = std::move(next);
  }
  result.status = PlanStatus::NoSolution;
  return result;
}

PlanResult solve_nfl(const PlanningTask& t, NflMode mode, bool parallel) {
  for (const auto& x : t.actions) {
    if (mode == NflMode::Strict && !is_nfl(x)) throw NotNfl(x.name);
    if (mode == NflMode::Relaxed && !is_nfl_relaxed(x)) throw NotNfl(x.name);
  }
  SearchOptions options;
  options.parallel = parallel;
  return search(t, options);
}

PlanResult solve_bounded(const PlanningTask& t, std::size_t max_depth, bool parallel) {
  SearchOptions options;
  options.parallel = parallel;
  options.max_depth = max_depth;
  PlanResult r = search(t, options);
  if (r.status == PlanStatus::NoSolution) r.status = PlanStatus::NoneWithinBound;
  return r;
}

}  // namespace attn
