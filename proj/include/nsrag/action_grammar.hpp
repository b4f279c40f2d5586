#pragma once

#include <optional>
#include <set>
#include <string>

#include "nsrag/action.hpp"
#include "nsrag/schema.hpp"
#include "nsrag/vectorstore.hpp"

namespace nsrag {

enum class ActionFormat { Markdown, Json, Xml, Yaml };

const char* to_string(ActionFormat fmt);
std::optional<ActionFormat> action_format_from_string(const std::string& name);

/// Parses exactly one action from the block after "[Action]:". Unknown
/// parameters are rejected; optional parameters get their defaults. Errors
/// name the configured format's expectation so they can be fed back to the
/// agent as an instructive observation.
Action parse_action(const std::string& text, ActionFormat fmt);

/// Canonical rendering; parse_action(serialize_action(a, fmt), fmt) == a
/// with defaults normalized.
std::string serialize_action(const Action& action, ActionFormat fmt);

/// Applies defaults and checks catalog-level invariants: the collection
/// exists, (table, column) is encodable, the limit is positive (clamped to
/// the hard cap), bounding boxes are empty or 4 numbers, pages are >= 1.
Action validate_action(const Action& action, const SchemaCatalog& catalog,
                       const VectorStore* store);

/// The "## Action and Observation Space" prompt block for the allowed
/// variants in the given format: description, observation space, syntax
/// and parameters, and use cases per action.
std::string action_space_prompt(const std::set<ActionType>& allowed, ActionFormat fmt);

}  // namespace nsrag
