#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attn/actions.hpp"

namespace attn {

/// Attention action with Q* discrete, questions T and all costs 0. Throws
/// Error if y has postconditions, more than one designated event, or a
/// relation that is not an equivalence.
AttentionAction from_nopost(const EpistemicAction& y);

/// Epistemic action with postconditions whose product update on Kripke
/// renditions mirrors the attention update by x. Events are named
/// <event>_<profile>, where the profile has one '1'/'0' per agent telling
/// whether that agent can afford its question. Throws CostLookupMiss.
EpistemicAction to_post(const AttentionAction& x);

/// The formula "after f, agent's attention equals n" in to_post.
Formula next_value(const std::string& agent, unsigned n, unsigned cost, unsigned bound);

enum class Verdict { Equivalent, NotEquivalent, Undefined };

struct EquivalenceResult {
  Verdict verdict = Verdict::Equivalent;
  /// Human-readable explanation for NotEquivalent and Undefined.
  std::string reason;
  /// Formula true in the attention pipeline's result and false in the other.
  std::optional<Formula> distinguishing;
};

/// Compares x and y on each state: both inapplicable, or the rendition of
/// the attention update is Kripke-bisimilar to the product update of the
/// rendition. Undefined when x's update is ill formed on that state.
/// Throws SignatureMismatch.
std::vector<EquivalenceResult> check_equivalent_on(const std::vector<AttentionState>& states,
                                                   const AttentionAction& x, const EpistemicAction& y,
                                                   bool parallel = true);

/// A formula of modal depth at most `depth`, built from atoms that vary in
/// either model, that holds at a.actual and fails at b.actual.
std::optional<Formula> distinguishing_formula(const EpistemicState& a, const EpistemicState& b,
                                              std::size_t depth = 2);

}  // namespace attn
