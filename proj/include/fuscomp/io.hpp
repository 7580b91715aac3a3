// JSON input for groups and fusion systems.
#pragma once

#include <memory>
#include <string>

#include "fuscomp/fusion.hpp"

namespace fuscomp {

struct FusionInput {
    std::shared_ptr<const FiniteGroup> ambient;  // null for abstract systems
    FusionPtr F;
};

std::shared_ptr<const FiniteGroup> load_group(const std::string& path);
std::shared_ptr<const FiniteGroup> parse_group(const std::string& text, const std::string& origin);
// Relative ambient paths resolve against the fusion file's directory.
FusionInput load_fusion(const std::string& path);
FusionInput parse_fusion(const std::string& text, const std::string& origin, const std::string& base_dir);

// Bundled data file by name, e.g. "gl23.json".
std::string data_path(const std::string& name);

// The subgroup of the ambient group normalizing a subgroup of S, as a group
// acting on the same points.
std::shared_ptr<const FiniteGroup> ambient_normalizer(const FiniteGroup& ambient, const Universe& U, int H);

}  // namespace fuscomp
