#ifndef BANDFOREST_PERSIST_HPP
#define BANDFOREST_PERSIST_HPP

/*
 * Text model format, version 1. See docs/model_format.md for the grammar.
 *
 * Output is a pure function of the model: fields in fixed order, categories
 * in id order, nodes in pre-order with children ascending by category, bands
 * ascending. Reals use the shortest decimal form that parses back to the same
 * double, so save(load(save(m))) == save(m) byte for byte.
 */

#include "bandforest/model.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace bandforest {

inline constexpr int model_format_version = 1;

/// Throws IntegrityError for an untrained model, Error when the stream fails.
void save(const Model& model, std::ostream& sink);
std::string save_to_string(const Model& model);
void save_file(const Model& model, const std::string& path);

/// Throws VersionError, ParseError (naming the section) or IntegrityError.
Model load(std::istream& source);
Model load_from_string(const std::string& text);
Model load_file(const std::string& path);

/// Structural checks run by load(); exposed for tests and tools.
void check_model(const Model& model);

} // namespace bandforest

#endif // BANDFOREST_PERSIST_HPP
