#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "carmc/pipeline.hpp"

namespace carmc::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CARMC_TEST_DATA) / name;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline RequirementsModel load_fixture(const std::string& carm, const std::string& ann = "") {
  DiagnosticSink sink;
  std::optional<std::filesystem::path> ann_path;
  if (!ann.empty()) ann_path = data_path(ann);
  return load_model({data_path(carm)}, ann_path, sink);
}

inline PipelineResult derive_fixture(const std::string& carm, const std::string& ann = "",
                                     PipelineOptions options = {}) {
  DiagnosticSink sink;
  return run_pipeline(load_fixture(carm, ann), options, sink);
}

inline PipelineResult derive_hospital() {
  return derive_fixture("hospital.carm", "hospital.ann");
}

}  // namespace carmc::testing
