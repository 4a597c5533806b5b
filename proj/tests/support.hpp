#pragma once

#include <fstream>
#include <memory>
#include <string>

#include "fcat/fusion_data.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) {
  return std::string(FCAT_DATA_DIR) + "/" + name + ".json";
}

inline std::shared_ptr<const fcat::CategorySpec> load(const std::string& name) {
  return fcat::CategorySpec::load(data_path(name));
}

inline nlohmann::json load_doc(const std::string& name) {
  std::ifstream in(data_path(name));
  return nlohmann::json::parse(in);
}

}  // namespace testing_support
