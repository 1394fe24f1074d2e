#pragma once

#include <utility>

#include "momentflow/action_model.hpp"
#include "momentflow/bracket.hpp"

namespace momentflow {

/// Action model for GL_n(R) or SL_n(R) on skew tensors, with the infinitesimal
/// action X.mu and the all-ordered-pairs inner product on V.
ActionModel bracket_action_model(Index n, GroupTag tag);

/// Action model for realified GL_n(C) on complexified skew tensors. The moment
/// map of this model is the real moment map of the complex group; on embedded
/// real tensors it reproduces the real moment matrix exactly.
ActionModel complex_bracket_action_model(Index n);

/// Embeds a real tensor into the realified complex representation together
/// with the matching action model.
std::pair<ComplexBracket, ActionModel> complexify(const Bracket& mu);

}  // namespace momentflow
