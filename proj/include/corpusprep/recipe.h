// Copyright 2026 The corpusprep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Pipeline recipes: a plain-text file naming external inputs and an ordered
// list of stages, validated against the stage-order rules and executed into
// a manifest of per-stage reports and output checksums.
//
// Format:
//
//   # comment
//   seed = 42
//
//   [inputs]
//   ja = raw/ja.txt          # name = path relative to the data directory
//
//   [normalize]
//   input = ja
//   output = ja.norm         # written to <work dir>/ja.norm
//
// Stage sections are [normalize], [filter], [map-script], [lm-train],
// [lm-score], [select], [mix] and [mass-gen]. Datasets are referred to by
// name: either an [inputs] entry or an earlier stage's output.

#ifndef CORPUSPREP_RECIPE_H_
#define CORPUSPREP_RECIPE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corpusprep/core.h"
#include "json.hpp"

namespace corpusprep {

struct StageSpec {
  std::string type;
  std::string name;  // defaults to the stage's `output`
  std::vector<std::pair<std::string, std::string>> params;  // file order
  std::size_t line = 0;

  const std::string* Get(const std::string& key) const;
};

struct PipelineRecipe {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> path
  std::vector<StageSpec> stages;

  // Throws FormatError on syntax errors. Stage semantics are checked by
  // ValidateRecipe, not here.
  static PipelineRecipe Parse(std::istream& in);
  static PipelineRecipe Load(const std::string& path);
};

// Violations of the ordering, reference and parameter rules; empty iff the
// recipe can run.
std::vector<std::string> ValidateRecipe(const PipelineRecipe& recipe);

struct RunOptions {
  std::string data_dir = ".";
  std::string work_dir = ".";
};

struct OutputRecord {
  std::string name;
  std::string path;
  std::string sha256;
  std::uint64_t lines = 0;
  bool partial = false;  // written by a failed stage
};

struct StageRecord {
  std::string name;
  std::string type;
  std::string status = "not_run";  // ok | failed | not_run
  std::string error;
  std::uint64_t input_lines = 0;   // lines in the stage's corpus inputs
  std::uint64_t stage_seed = 0;
  std::optional<SelectionReport> report;
  std::vector<OutputRecord> outputs;
  double elapsed_seconds = 0;
  // Report conserves lines, lines_read matches the corpus inputs, and every
  // corpus output holds lines_written lines.
  bool conservation_ok = false;
};

struct Manifest {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<StageRecord> stages;

  nlohmann::json ToJson() const;
  // Output name -> checksum, for determinism comparisons.
  std::map<std::string, std::string> Checksums() const;
};

// Runs the stages in order. A failing stage stops the run; its partial
// outputs are kept and flagged, later stages are recorded as not_run.
// Validation failures (including an empty stage list) are reported the same
// way without running anything.
Manifest RunRecipe(const PipelineRecipe& recipe, const RunOptions& options);

}  // namespace corpusprep

#endif  // CORPUSPREP_RECIPE_H_
