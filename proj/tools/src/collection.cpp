#include "hpt_cli/collection.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hpt/errors.hpp"
#include "hpt/expression.hpp"

namespace hpt::cli {

using nlohmann::json;

HRVCollection parse_collection_json(const SpaceHandle& space, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed collection JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  try {
    HRVCollection x;
    x.var_degrees = doc.at("var_degrees").get<std::vector<int>>();
    for (const auto& c : doc.value("components", json::array())) {
      auto indices = c.at("indices").get<std::vector<int>>();
      for (int i : indices)
        if (i < 0 || static_cast<std::size_t>(i) >= x.var_degrees.size())
          throw SpecError("component index " + std::to_string(i) + " is out of range");
      std::sort(indices.begin(), indices.end());
      const Element value = parse_expression(*space, c.at("value").get<std::string>());
      if (!x.components.emplace(indices, value).second) throw SpecError("component given twice");
    }
    return x;
  } catch (const json::exception& e) {
    throw SpecError(std::string("collection JSON has the wrong shape: ") + e.what());
  }
}

HRVCollection load_collection_file(const SpaceHandle& space, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_collection_json(space, buf.str());
}

std::string to_json(const HRVCollection& x, const Space& space) {
  json comps = json::array();
  for (const auto& [idx, value] : x.components) comps.push_back({{"indices", idx}, {"value", space.format(value)}});
  return json{{"var_degrees", x.var_degrees}, {"components", comps}}.dump(2);
}

}  // namespace hpt::cli
