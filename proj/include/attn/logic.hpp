#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace attn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("syntax error at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  SignatureMismatch() : Error("signature mismatch") {}
};

/// Agents, attention bound N and the proposition atoms Φ a model or formula
/// ranges over. Attention atoms are not listed; they are implied by agents
/// and the bound.
///
/// The full atom set Φ ∪ Ψ is indexed densely: propositions first, then for
/// each agent the N+1 atoms (att = n) followed by the N+1 atoms (att < n).
struct Signature {
  std::vector<std::string> agents;
  unsigned attention_bound = 0;
  std::vector<std::string> atoms;

  /// Validated construction. Throws ValidationError.
  static std::shared_ptr<const Signature> make(std::vector<std::string> agents,
                                               unsigned attention_bound,
                                               std::vector<std::string> atoms);

  std::optional<std::size_t> agent_index(std::string_view name) const;
  std::optional<std::size_t> atom_index(std::string_view name) const;

  std::size_t agent_count() const noexcept { return agents.size(); }
  std::size_t prop_count() const noexcept { return atoms.size(); }
  std::size_t full_atom_count() const noexcept {
    return atoms.size() + agents.size() * 2 * (std::size_t{attention_bound} + 1);
  }
  std::size_t att_eq_slot(std::size_t agent, unsigned n) const noexcept {
    return atoms.size() + agent * 2 * (std::size_t{attention_bound} + 1) + n;
  }
  std::size_t att_less_slot(std::size_t agent, unsigned n) const noexcept {
    return att_eq_slot(agent, n) + attention_bound + 1;
  }

  bool operator==(const Signature&) const = default;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// True when the name is usable as an agent or atom identifier and does not
/// collide with the reserved words T, F, K_* and att_*.
bool is_plain_identifier(std::string_view name);

enum class FormulaKind : std::uint8_t { Top, Prop, AttEq, AttLess, Not, And, Know };

/// Immutable, structurally shared formula tree. Only the primitive
/// connectives are stored; the derived ones are expanded by their builders.
class Formula {
 public:
  static Formula top();
  static Formula prop(std::string name);
  static Formula att_eq(std::string agent, unsigned n);
  static Formula att_less(std::string agent, unsigned n);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula know(std::string agent, Formula f);

  // Abbreviations, expanded on construction.
  static Formula bottom();
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);
  static Formula att_greater(std::string agent, unsigned n);
  static Formula att_geq(std::string agent, unsigned n);
  /// Left fold with conjunction; the empty list yields T.
  static Formula all_of(std::span<const Formula> fs);
  /// Left fold with disjunction; the empty list yields F.
  static Formula any_of(std::span<const Formula> fs);

  Formula();  // T

  FormulaKind kind() const noexcept;
  /// Atom name for Prop, agent name for AttEq/AttLess/Know.
  const std::string& name() const noexcept;
  unsigned value() const noexcept;
  /// Operand of Not/Know, left operand of And.
  const Formula& lhs() const noexcept;
  const Formula& rhs() const noexcept;

  std::size_t hash() const noexcept;
  bool is_top() const noexcept { return kind() == FormulaKind::Top; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name, unsigned value,
                      const Formula* lhs, const Formula* rhs);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Grammar (ASCII): T F ident (att_a = n) (att_a < n) (att_a > n) (att_a >= n)
/// ~ & | -> <-> K_a ( ). Tightest first: ~ and K_; &; |; -> and <-> (right
/// associative). Throws ParseError or ValidationError.
Formula parse_formula(std::string_view text, const Signature& sig);
/// Parsing without a signature (no validation).
Formula parse_formula(std::string_view text);

/// Fully parenthesized rendering accepted by parse_formula.
std::string to_string(const Formula& f);
std::ostream& operator<<(std::ostream& os, const Formula& f);

std::size_t modal_depth(const Formula& f);

/// Empty when f is well formed over sig.
std::vector<std::string> validation_errors(const Formula& f, const Signature& sig);
void validate(const Formula& f, const Signature& sig);

/// Finite model produced by the tableau for a satisfiable formula. Worlds are
/// 0..world_count-1 and world 0 satisfies the formula.
struct TableauModel {
  std::size_t world_count = 0;
  /// [agent][world] -> block id, agents in signature order.
  std::vector<std::vector<std::size_t>> block_of;
  /// [world] -> true proposition names.
  std::vector<std::vector<std::string>> true_atoms;
  /// [agent][world] -> attention value.
  std::vector<std::vector<unsigned>> attention;
};

/// Decides satisfiability over all attention states for sig and returns a
/// model when one exists.
std::optional<TableauModel> find_model(const Signature& sig, const Formula& f);
bool is_satisfiable(const Signature& sig, const Formula& f);
bool is_valid(const Signature& sig, const Formula& f);
/// f ⊨ g. Results are memoized; safe to call concurrently.
bool entails(const Signature& sig, const Formula& f, const Formula& g);

}  // namespace attn

template <>
struct std::hash<attn::Formula> {
  std::size_t operator()(const attn::Formula& f) const noexcept { return f.hash(); }
};
