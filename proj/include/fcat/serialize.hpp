#pragma once

#include "json.hpp"

#include "fcat/tube.hpp"

namespace fcat {

// Words are arrays of label ids; a sum letter is {"sum": [m_0, m_1, ...]}.
nlohmann::json word_to_json(const CategorySpec& spec, const Word& w);
Word word_from_json(const CategorySpec& spec, const nlohmann::json& j);

// {source, target, blocks: [{channel, rows, cols, data: [[re, im], ...] row-major}]}
// channels with an empty block are omitted.
nlohmann::json morphism_to_json(const Calculus& c, const Morphism& m);
Morphism morphism_from_json(const Calculus& c, const nlohmann::json& j);

nlohmann::json tube_to_json(const Calculus& c, const TubeMorphism& m);
TubeMorphism tube_from_json(const Calculus& c, const nlohmann::json& j);

}  // namespace fcat
