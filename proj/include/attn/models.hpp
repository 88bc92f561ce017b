#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attn/logic.hpp"

namespace attn {

/// Partition of {0..n-1}. Blocks are numbered by first occurrence, so two
/// partitions are equal iff their block_of vectors are.
class Partition {
 public:
  Partition() = default;

  static Partition discrete(std::size_t n);
  static Partition total(std::size_t n);
  /// Throws ValidationError unless the blocks cover {0..n-1} exactly.
  static Partition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks);
  /// Arbitrary labels; renumbered.
  static Partition from_labels(const std::vector<std::size_t>& labels);
  /// Equivalence closure of the edge list.
  static Partition from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return block_.size(); }
  std::size_t block_count() const noexcept { return count_; }
  std::size_t block_of(std::size_t x) const { return block_.at(x); }
  const std::vector<std::size_t>& labels() const noexcept { return block_; }
  bool related(std::size_t a, std::size_t b) const { return block_.at(a) == block_.at(b); }
  bool is_total() const noexcept { return count_ <= 1; }
  bool is_discrete() const noexcept { return count_ == block_.size(); }
  std::vector<std::vector<std::size_t>> blocks() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> block_;
  std::size_t count_ = 0;
};

/// Finest partition coarser than both, i.e. the components of a ∪ b.
Partition join(const Partition& a, const Partition& b);

/// Pointed multi-agent S5 model with attention values.
struct AttentionState {
  SignaturePtr sig;
  std::vector<std::string> worlds;
  std::vector<Partition> relations;            // [agent]
  std::vector<std::vector<bool>> valuation;    // [world][prop]
  std::vector<std::vector<unsigned>> attention;  // [agent][world]
  std::size_t actual = 0;

  std::size_t world_count() const noexcept { return worlds.size(); }
  std::optional<std::size_t> world_index(std::string_view name) const;
};

/// Pointed multi-agent S5 model whose valuation ranges over every atom of the
/// signature, attention atoms included (see Signature's slot layout).
struct EpistemicState {
  SignaturePtr sig;
  std::vector<std::string> worlds;
  std::vector<Partition> relations;          // [agent]
  std::vector<std::vector<bool>> valuation;  // [world][full atom slot]
  std::size_t actual = 0;

  std::size_t world_count() const noexcept { return worlds.size(); }
  std::optional<std::size_t> world_index(std::string_view name) const;
};

/// Empty when the state is well formed.
std::vector<std::string> validate_state(const AttentionState& s);
std::vector<std::string> validate_state(const EpistemicState& s);
/// Throws ValidationError carrying the first diagnostic.
void require_valid(const AttentionState& s);
void require_valid(const EpistemicState& s);

/// Truth of f at every world, f already validated.
std::vector<char> extension(const AttentionState& s, const Formula& f);
std::vector<char> extension(const EpistemicState& s, const Formula& f);

bool check(const AttentionState& s, const Formula& f, std::size_t at);
bool check(const AttentionState& s, const Formula& f);
bool check_epistemic(const EpistemicState& s, const Formula& f, std::size_t at);
bool check_epistemic(const EpistemicState& s, const Formula& f);

/// Slot of an atomic formula (Prop, AttEq, AttLess) in the full atom index.
std::size_t atom_slot(const Signature& sig, const Formula& atom);
/// Inverse of atom_slot.
Formula slot_atom(const Signature& sig, std::size_t slot);

EpistemicState kripke_rendition(const AttentionState& s);

/// Keeps worlds, relations, proposition valuation and actual world and
/// installs the given attention ([agent][world], all zeros when omitted).
/// Throws ValidationError when the map violates the bound or block constancy.
AttentionState attention_state_from_epistemic(
    const EpistemicState& s, std::optional<std::vector<std::vector<unsigned>>> attention = std::nullopt);

/// Attention state described by a tableau model; world 0 is actual.
AttentionState from_tableau_model(SignaturePtr sig, const TableauModel& m);

}  // namespace attn
