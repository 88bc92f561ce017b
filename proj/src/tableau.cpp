// Satisfiability for multi-agent S5 with attention atoms.
//
// A branch is a set of labelled worlds grouped into one equivalence class per
// agent. Boxes live on classes and are pushed to every member; a diamond is
// discharged by any class member carrying its operand, otherwise a fresh
// member is added. Attention atoms narrow a per-class candidate set of values
// in {0..N}; the branch closes when a set empties. Each witness gets fresh
// classes for the other agents and strictly smaller modal depth, so
// expansion terminates.

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "attn/logic.hpp"

namespace attn {
namespace {

enum class Op : std::uint8_t { True, False, Prop, NProp, Eq, NEq, Less, NLess, And, Or, Box, Dia };

struct NNode {
  Op op = Op::True;
  int arg = 0;  // atom index or agent index
  unsigned n = 0;
  int lhs = -1;
  int rhs = -1;
  bool operator==(const NNode&) const = default;
};

struct NNodeHash {
  std::size_t operator()(const NNode& x) const noexcept {
    std::size_t h = static_cast<std::size_t>(x.op);
    h = h * 1000003u ^ static_cast<std::size_t>(x.arg);
    h = h * 1000003u ^ x.n;
    h = h * 1000003u ^ static_cast<std::size_t>(x.lhs + 1);
    h = h * 1000003u ^ static_cast<std::size_t>(x.rhs + 1);
    return h;
  }
};

/// Interned negation normal form.
class Arena {
 public:
  explicit Arena(const Signature& sig) : sig_(sig) {}

  int convert(const Formula& f, bool negated) {
    switch (f.kind()) {
      case FormulaKind::Top:
        return intern({negated ? Op::False : Op::True});
      case FormulaKind::Prop:
        return intern({negated ? Op::NProp : Op::Prop, static_cast<int>(*sig_.atom_index(f.name()))});
      case FormulaKind::AttEq:
        return intern({negated ? Op::NEq : Op::Eq, agent(f), f.value()});
      case FormulaKind::AttLess:
        return intern({negated ? Op::NLess : Op::Less, agent(f), f.value()});
      case FormulaKind::Not:
        return convert(f.lhs(), !negated);
      case FormulaKind::And: {
        const int l = convert(f.lhs(), negated);
        const int r = convert(f.rhs(), negated);
        return intern({negated ? Op::Or : Op::And, 0, 0, l, r});
      }
      case FormulaKind::Know: {
        const int body = convert(f.lhs(), negated);
        return intern({negated ? Op::Dia : Op::Box, agent(f), 0, body});
      }
    }
    return intern({Op::True});
  }

  const NNode& operator[](int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

  /// Id of the complementary literal, or -1 when it never occurs.
  int complement(int id) const {
    const NNode& x = nodes_[static_cast<std::size_t>(id)];
    NNode c = x;
    c.op = x.op == Op::Prop ? Op::NProp : Op::Prop;
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  int agent(const Formula& f) const { return static_cast<int>(*sig_.agent_index(f.name())); }

  int intern(NNode x) {
    auto [it, inserted] = index_.emplace(x, static_cast<int>(nodes_.size()));
    if (inserted) nodes_.push_back(x);
    return it->second;
  }

  const Signature& sig_;
  std::vector<NNode> nodes_;
  std::unordered_map<NNode, int, NNodeHash> index_;
};

/// Candidate attention values {0..N} as a bitset.
class ValueSet {
 public:
  explicit ValueSet(unsigned bound) : bound_(bound), words_((bound + 64) / 64, ~std::uint64_t{0}) {
    trim();
  }
  void keep_only(unsigned n) {
    const bool had = contains(n);
    std::fill(words_.begin(), words_.end(), 0);
    if (had) set(n);
  }
  void remove(unsigned n) {
    if (n <= bound_) words_[n / 64] &= ~(std::uint64_t{1} << (n % 64));
  }
  void keep_below(unsigned n) {
    for (unsigned v = n; v <= bound_; ++v) remove(v);
  }
  void keep_at_least(unsigned n) {
    for (unsigned v = 0; v < n && v <= bound_; ++v) remove(v);
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool contains(unsigned n) const {
    return n <= bound_ && (words_[n / 64] >> (n % 64)) & 1u;
  }
  unsigned smallest() const {
    for (unsigned v = 0; v <= bound_; ++v) {
      if (contains(v)) return v;
    }
    return 0;
  }

 private:
  void set(unsigned n) { words_[n / 64] |= std::uint64_t{1} << (n % 64); }
  void trim() {
    const unsigned used = (bound_ + 1) % 64;
    if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
  }
  unsigned bound_;
  std::vector<std::uint64_t> words_;
};

struct TClass {
  std::vector<int> members;
  std::vector<int> boxes;
  ValueSet values;
};

struct TWorld {
  std::vector<char> label;
  std::vector<int> cls;  // per agent
};

struct Branch {
  std::vector<TWorld> worlds;
  std::vector<TClass> classes;
  std::vector<std::pair<int, int>> todo;
  std::vector<std::pair<int, int>> ors;
  std::vector<std::pair<int, int>> dias;
};

class Prover {
 public:
  Prover(const Signature& sig, Arena& arena) : sig_(sig), arena_(arena) {}

  int new_world(Branch& b, int via_agent, int via_class) const {
    const int id = static_cast<int>(b.worlds.size());
    TWorld w;
    w.label.assign(arena_.size(), 0);
    w.cls.resize(sig_.agent_count());
    for (std::size_t a = 0; a < sig_.agent_count(); ++a) {
      if (static_cast<int>(a) == via_agent) {
        w.cls[a] = via_class;
      } else {
        w.cls[a] = static_cast<int>(b.classes.size());
        b.classes.push_back(TClass{{}, {}, ValueSet(sig_.attention_bound)});
      }
      b.classes[static_cast<std::size_t>(w.cls[a])].members.push_back(id);
    }
    b.worlds.push_back(std::move(w));
    return id;
  }

  /// Saturates b; on success b is an open saturated branch.
  bool expand(Branch& b) const {
    for (;;) {
      while (!b.todo.empty()) {
        auto [w, id] = b.todo.back();
        b.todo.pop_back();
        if (!process(b, w, id)) return false;
      }
      if (auto pick = unresolved_or(b)) {
        auto [w, id] = *pick;
        Branch left = b;
        left.todo.emplace_back(w, arena_[id].lhs);
        if (expand(left)) {
          b = std::move(left);
          return true;
        }
        b.todo.emplace_back(w, arena_[id].rhs);
        continue;
      }
      if (auto pick = unwitnessed_diamond(b)) {
        auto [w, id] = *pick;
        const NNode& d = arena_[id];
        const int cls = b.worlds[static_cast<std::size_t>(w)].cls[static_cast<std::size_t>(d.arg)];
        const int v = new_world(b, d.arg, cls);
        b.todo.emplace_back(v, d.lhs);
        for (int box : b.classes[static_cast<std::size_t>(cls)].boxes) b.todo.emplace_back(v, box);
        continue;
      }
      return true;
    }
  }

 private:
  bool process(Branch& b, int w, int id) const {
    auto& label = b.worlds[static_cast<std::size_t>(w)].label;
    if (label[static_cast<std::size_t>(id)]) return true;
    label[static_cast<std::size_t>(id)] = 1;
    const NNode& x = arena_[id];
    auto values = [&]() -> ValueSet& {
      const int cls = b.worlds[static_cast<std::size_t>(w)].cls[static_cast<std::size_t>(x.arg)];
      return b.classes[static_cast<std::size_t>(cls)].values;
    };
    switch (x.op) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::Prop:
      case Op::NProp: {
        const int c = arena_.complement(id);
        return c < 0 || !label[static_cast<std::size_t>(c)];
      }
      case Op::Eq:
        values().keep_only(x.n);
        return !values().empty();
      case Op::NEq:
        values().remove(x.n);
        return !values().empty();
      case Op::Less:
        values().keep_below(x.n);
        return !values().empty();
      case Op::NLess:
        values().keep_at_least(x.n);
        return !values().empty();
      case Op::And:
        b.todo.emplace_back(w, x.lhs);
        b.todo.emplace_back(w, x.rhs);
        return true;
      case Op::Or:
        b.ors.emplace_back(w, id);
        return true;
      case Op::Box: {
        const int cls = b.worlds[static_cast<std::size_t>(w)].cls[static_cast<std::size_t>(x.arg)];
        auto& klass = b.classes[static_cast<std::size_t>(cls)];
        if (std::find(klass.boxes.begin(), klass.boxes.end(), x.lhs) != klass.boxes.end()) return true;
        klass.boxes.push_back(x.lhs);
        for (int m : klass.members) b.todo.emplace_back(m, x.lhs);
        return true;
      }
      case Op::Dia:
        b.dias.emplace_back(w, id);
        return true;
    }
    return true;
  }

  std::optional<std::pair<int, int>> unresolved_or(const Branch& b) const {
    for (auto [w, id] : b.ors) {
      const auto& label = b.worlds[static_cast<std::size_t>(w)].label;
      const NNode& x = arena_[id];
      if (!label[static_cast<std::size_t>(x.lhs)] && !label[static_cast<std::size_t>(x.rhs)]) {
        return std::make_pair(w, id);
      }
    }
    return std::nullopt;
  }

  std::optional<std::pair<int, int>> unwitnessed_diamond(const Branch& b) const {
    for (auto [w, id] : b.dias) {
      const NNode& x = arena_[id];
      const int cls = b.worlds[static_cast<std::size_t>(w)].cls[static_cast<std::size_t>(x.arg)];
      const auto& members = b.classes[static_cast<std::size_t>(cls)].members;
      const bool witnessed = std::any_of(members.begin(), members.end(), [&](int m) {
        return b.worlds[static_cast<std::size_t>(m)].label[static_cast<std::size_t>(x.lhs)] != 0;
      });
      if (!witnessed) return std::make_pair(w, id);
    }
    return std::nullopt;
  }

  const Signature& sig_;
  Arena& arena_;
};

TableauModel extract(const Signature& sig, const Arena& arena, const Branch& b) {
  TableauModel m;
  m.world_count = b.worlds.size();
  m.block_of.assign(sig.agent_count(), std::vector<std::size_t>(m.world_count));
  m.attention.assign(sig.agent_count(), std::vector<unsigned>(m.world_count));
  m.true_atoms.resize(m.world_count);
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    std::unordered_map<int, std::size_t> renumber;
    for (std::size_t w = 0; w < m.world_count; ++w) {
      const int cls = b.worlds[w].cls[a];
      auto [it, _] = renumber.emplace(cls, renumber.size());
      m.block_of[a][w] = it->second;
      m.attention[a][w] = b.classes[static_cast<std::size_t>(cls)].values.smallest();
    }
  }
  for (std::size_t w = 0; w < m.world_count; ++w) {
    for (std::size_t id = 0; id < arena.size(); ++id) {
      const NNode& x = arena[static_cast<int>(id)];
      if (x.op == Op::Prop && b.worlds[w].label[id]) {
        m.true_atoms[w].push_back(sig.atoms[static_cast<std::size_t>(x.arg)]);
      }
    }
    std::sort(m.true_atoms[w].begin(), m.true_atoms[w].end());
  }
  return m;
}

}  // namespace

std::optional<TableauModel> find_model(const Signature& sig, const Formula& f) {
  validate(f, sig);
  Arena arena(sig);
  const int root = arena.convert(f, false);
  Prover prover(sig, arena);
  Branch b;
  prover.new_world(b, -1, -1);
  b.todo.emplace_back(0, root);
  if (!prover.expand(b)) return std::nullopt;
  return extract(sig, arena, b);
}

}  // namespace attn
