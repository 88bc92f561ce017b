// Serial vs. OpenMP frontier expansion in the planner.

#include <benchmark/benchmark.h>

#include "attn/document.hpp"
#include "attn/planner.hpp"
#include "support/generators.hpp"

using namespace attn;

namespace {

/// Exhaustive search: goal F forces the whole reachable space to be visited.
PlanningTask exhaustive(PlanningTask t) {
  t.goal = Formula::bottom();
  return t;
}

const PlanningTask& prover_task() {
  static const PlanningTask t = exhaustive(load_document(attn::testing::fixture("prover.task")).task("main"));
  return t;
}

const PlanningTask& muddy_task() {
  static const PlanningTask t = [] {
    const TaskDocument doc = load_document(attn::testing::fixture("muddy.task"));
    PlanningTask task = exhaustive(doc.task("row1"));
    task.actions = {doc.action("A_T"), doc.action("Aprime_phi"), doc.action("Adprime_phi")};
    return task;
  }();
  return t;
}

/// Three agents who may each ask about any of three facts, one unit of
/// attention per question. Every agent's knowledge and attention evolve
/// independently, which makes the BFS layers wide.
const PlanningTask& wide_task() {
  static const PlanningTask t = [] {
    auto sig = Signature::make({"a", "b", "c"}, 2, {"p", "q", "r"});
    PlanningTask task;
    AttentionState& s = task.initial;
    s.sig = sig;
    auto m = std::make_shared<AttentionActionModel>();
    m->sig = sig;
    for (unsigned v = 0; v < 8; ++v) {
      std::vector<bool> row;
      std::vector<Formula> lits;
      std::string name;
      for (unsigned k = 0; k < 3; ++k) {
        const bool on = (v >> k) & 1u;
        row.push_back(on);
        const Formula atom = Formula::prop(sig->atoms[k]);
        lits.push_back(on ? atom : Formula::negation(atom));
        name += on ? sig->atoms[k] : "n" + sig->atoms[k];
      }
      s.worlds.push_back(name);
      s.valuation.push_back(row);
      m->events.push_back("e_" + name);
      m->pre.push_back(Formula::all_of(lits));
    }
    for (std::size_t a = 0; a < 3; ++a) {
      s.relations.push_back(Partition::total(8));
      s.attention.push_back(std::vector<unsigned>(8, 2));
      m->q.push_back(Partition::discrete(8));
      m->qstar.push_back(Partition::total(8));
    }
    s.actual = 7;
    m->costs = CostTable::uniform(3, 1);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t k = 0; k < 3; ++k) {
        std::vector<Formula> questions(3, Formula::top());
        questions[a] = Formula::prop(sig->atoms[k]);
        task.actions.push_back({m, questions, 7, sig->agents[a] + "_asks_" + sig->atoms[k]});
      }
    }
    task.goal = Formula::bottom();
    return task;
  }();
  return t;
}

void run(benchmark::State& state, const PlanningTask& t) {
  SearchOptions options;
  options.parallel = state.range(0) != 0;
  for (auto _ : state) {
    PlanResult r = search(t, options);
    benchmark::DoNotOptimize(r);
    state.counters["generated"] = static_cast<double>(r.stats.generated);
  }
}

void BM_Prover(benchmark::State& s) { run(s, prover_task()); }
void BM_Muddy(benchmark::State& s) { run(s, muddy_task()); }
void BM_Wide(benchmark::State& s) { run(s, wide_task()); }

}  // namespace

// Argument 0 is the serial reference, 1 the parallel expansion.
BENCHMARK(BM_Prover)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Muddy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wide)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
