#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hpt/linfty.hpp"

namespace hpt::cli {

// Sidecar shape:
//   {"var_degrees": [0, 0],
//    "components": [{"indices": [0], "value": "x"}, {"indices": [0, 1], "value": "1"}]}
// Values are expressions in `space`. Throws ParseError / SpecError.
HRVCollection parse_collection_json(const SpaceHandle& space, std::string_view text);
HRVCollection load_collection_file(const SpaceHandle& space, const std::filesystem::path& path);
std::string to_json(const HRVCollection& x, const Space& space);

}  // namespace hpt::cli
