#include "attn/logic.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace attn {

struct Formula::Node {
  FormulaKind kind = FormulaKind::Top;
  std::string name;
  unsigned value = 0;
  Formula lhs_view{nullptr};
  Formula rhs_view{nullptr};
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(FormulaKind kind, std::string name, unsigned value, const Formula* lhs,
                      const Formula* rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->name = std::move(name);
  n->value = value;
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(kind));
  h = mix(h, std::hash<std::string>{}(n->name));
  h = mix(h, value);
  if (lhs) {
    n->lhs_view = *lhs;
    h = mix(h, lhs->hash());
  }
  if (rhs) {
    n->rhs_view = *rhs;
    h = mix(h, rhs->hash());
  }
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::top() {
  static const Formula t = make(FormulaKind::Top, {}, 0, nullptr, nullptr);
  return t;
}

Formula::Formula() : Formula(top()) {}

Formula Formula::prop(std::string name) { return make(FormulaKind::Prop, std::move(name), 0, nullptr, nullptr); }
Formula Formula::att_eq(std::string agent, unsigned n) {
  return make(FormulaKind::AttEq, std::move(agent), n, nullptr, nullptr);
}
Formula Formula::att_less(std::string agent, unsigned n) {
  return make(FormulaKind::AttLess, std::move(agent), n, nullptr, nullptr);
}
Formula Formula::negation(Formula f) { return make(FormulaKind::Not, {}, 0, &f, nullptr); }
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return make(FormulaKind::And, {}, 0, &lhs, &rhs);
}
Formula Formula::know(std::string agent, Formula f) {
  return make(FormulaKind::Know, std::move(agent), 0, &f, nullptr);
}

Formula Formula::bottom() { return negation(top()); }
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return negation(conjunction(negation(std::move(lhs)), negation(std::move(rhs))));
}
Formula Formula::implication(Formula lhs, Formula rhs) {
  return negation(conjunction(std::move(lhs), negation(std::move(rhs))));
}
Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return conjunction(implication(lhs, rhs), implication(rhs, lhs));
}
Formula Formula::att_greater(std::string agent, unsigned n) {
  return conjunction(negation(att_less(agent, n)), negation(att_eq(agent, n)));
}
Formula Formula::att_geq(std::string agent, unsigned n) {
  return negation(att_less(std::move(agent), n));
}

Formula Formula::all_of(std::span<const Formula> fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conjunction(acc, fs[i]);
  return acc;
}

Formula Formula::any_of(std::span<const Formula> fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disjunction(acc, fs[i]);
  return acc;
}

FormulaKind Formula::kind() const noexcept { return node_->kind; }
const std::string& Formula::name() const noexcept { return node_->name; }
unsigned Formula::value() const noexcept { return node_->value; }
const Formula& Formula::lhs() const noexcept { return node_->lhs_view; }
const Formula& Formula::rhs() const noexcept { return node_->rhs_view; }
std::size_t Formula::hash() const noexcept { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.value() <=> b.value(); c != 0) return c;
  switch (a.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Know:
      return a.lhs() <=> b.lhs();
    case FormulaKind::And:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
    default:
      return std::strong_ordering::equal;
  }
}

// ---------------------------------------------------------------------------

bool is_plain_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  for (char c : name) {
    if (!alpha(c) && !digit(c) && c != '_') return false;
  }
  if (name == "T" || name == "F") return false;
  if (name.starts_with("K_") || name.starts_with("att_")) return false;
  return true;
}

std::shared_ptr<const Signature> Signature::make(std::vector<std::string> agents,
                                                 unsigned attention_bound,
                                                 std::vector<std::string> atoms) {
  if (agents.empty()) throw ValidationError("signature needs at least one agent");
  auto check_names = [](const std::vector<std::string>& names, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!is_plain_identifier(names[i])) {
        throw ValidationError(std::string("invalid ") + what + " name '" + names[i] + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (names[i] == names[j]) {
          throw ValidationError(std::string("duplicate ") + what + " '" + names[i] + "'");
        }
      }
    }
  };
  check_names(agents, "agent");
  check_names(atoms, "atom");
  auto sig = std::make_shared<Signature>();
  sig->agents = std::move(agents);
  sig->attention_bound = attention_bound;
  sig->atoms = std::move(atoms);
  return sig;
}

std::optional<std::size_t> Signature::agent_index(std::string_view name) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Signature::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] == name) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

void print_into(std::string& out, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Top:
      out += 'T';
      break;
    case FormulaKind::Prop:
      out += f.name();
      break;
    case FormulaKind::AttEq:
      out += "(att_" + f.name() + " = " + std::to_string(f.value()) + ")";
      break;
    case FormulaKind::AttLess:
      out += "(att_" + f.name() + " < " + std::to_string(f.value()) + ")";
      break;
    case FormulaKind::Not:
      out += '~';
      print_into(out, f.lhs());
      break;
    case FormulaKind::And:
      out += '(';
      print_into(out, f.lhs());
      out += " & ";
      print_into(out, f.rhs());
      out += ')';
      break;
    case FormulaKind::Know:
      out += "K_" + f.name() + " ";
      print_into(out, f.lhs());
      break;
  }
}

void collect_errors(const Formula& f, const Signature& sig, std::vector<std::string>& errs) {
  switch (f.kind()) {
    case FormulaKind::Top:
      return;
    case FormulaKind::Prop:
      if (!sig.atom_index(f.name())) errs.push_back("unknown atom '" + f.name() + "'");
      return;
    case FormulaKind::AttEq:
    case FormulaKind::AttLess:
      if (!sig.agent_index(f.name())) errs.push_back("unknown agent '" + f.name() + "'");
      if (f.value() > sig.attention_bound) {
        errs.push_back("attention value " + std::to_string(f.value()) + " exceeds bound " +
                       std::to_string(sig.attention_bound) + " in " + to_string(f));
      }
      return;
    case FormulaKind::Not:
      collect_errors(f.lhs(), sig, errs);
      return;
    case FormulaKind::And:
      collect_errors(f.lhs(), sig, errs);
      collect_errors(f.rhs(), sig, errs);
      return;
    case FormulaKind::Know:
      if (!sig.agent_index(f.name())) errs.push_back("unknown agent '" + f.name() + "'");
      collect_errors(f.lhs(), sig, errs);
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_into(out, f);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not:
      return modal_depth(f.lhs());
    case FormulaKind::And:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case FormulaKind::Know:
      return 1 + modal_depth(f.lhs());
    default:
      return 0;
  }
}

std::vector<std::string> validation_errors(const Formula& f, const Signature& sig) {
  std::vector<std::string> errs;
  collect_errors(f, sig, errs);
  return errs;
}

void validate(const Formula& f, const Signature& sig) {
  auto errs = validation_errors(f, sig);
  if (!errs.empty()) throw ValidationError(errs.front());
}

// ---------------------------------------------------------------------------

namespace {

struct EntailKey {
  unsigned bound;
  Formula lhs;
  Formula rhs;
  bool operator==(const EntailKey&) const = default;
};

struct EntailKeyHash {
  std::size_t operator()(const EntailKey& k) const noexcept {
    return mix(mix(k.bound, k.lhs.hash()), k.rhs.hash());
  }
};

class EntailmentCache {
 public:
  std::optional<bool> find(const EntailKey& key) {
    std::lock_guard lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void insert(EntailKey key, bool value) {
    std::lock_guard lock(mutex_);
    if (map_.size() > 200000) map_.clear();
    map_.emplace(std::move(key), value);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<EntailKey, bool, EntailKeyHash> map_;
};

EntailmentCache& entailment_cache() {
  static EntailmentCache cache;
  return cache;
}

}  // namespace

bool is_satisfiable(const Signature& sig, const Formula& f) { return find_model(sig, f).has_value(); }

bool is_valid(const Signature& sig, const Formula& f) {
  return !is_satisfiable(sig, Formula::negation(f));
}

bool entails(const Signature& sig, const Formula& f, const Formula& g) {
  validate(f, sig);
  validate(g, sig);
  if (g.is_top() || f == g) return true;
  // Only the bound influences validity; agents and atoms are read off the
  // formulas themselves.
  EntailKey key{sig.attention_bound, f, g};
  auto& cache = entailment_cache();
  if (auto hit = cache.find(key)) return *hit;
  const bool result = is_valid(sig, Formula::implication(f, g));
  cache.insert(std::move(key), result);
  return result;
}

}  // namespace attn
