#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "masc/target_analyzer.hpp"

namespace masc {

/// (file, anchor offset, kind).
using LocationKey = std::tuple<std::string, std::size_t, LocationKind>;

std::set<LocationKey> location_keys(const std::vector<SeedLocation>& locations);

/// Exhaustive-scope positions found by a brace scanner over the raw text:
/// every '{' is classified by the text leading up to it and by the kind of
/// the enclosing brace. Covers the Java shapes used by the fixtures.
std::set<LocationKey> lexical_locations(const std::string& path, const std::string& source);

/// Same over every .java file below `root`, paths relative to it.
std::set<LocationKey> lexical_locations(const std::filesystem::path& root);

} // namespace masc
