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

#include "corpusprep/recipe.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>

#include "corpusprep/checksum.h"
#include "corpusprep/mass_gen.h"
#include "corpusprep/mixing.h"
#include "corpusprep/ngram_lm.h"
#include "corpusprep/normalize_filter.h"
#include "corpusprep/random.h"
#include "corpusprep/script_map.h"
#include "corpusprep/selection.h"

namespace corpusprep {

namespace fs = std::filesystem;

const std::string* StageSpec::Get(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return &v;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string Trim(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string StripComment(const std::string& line) {
  const std::string t = Trim(line);
  if (!t.empty() && t.front() == '#') return "";
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] == '#' && IsAsciiSpace(t[i - 1])) return Trim(t.substr(0, i));
  }
  return t;
}

template <typename T>
std::optional<T> ParseNumber(const std::string& s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<bool> ParseBool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  return std::nullopt;
}

}  // namespace

PipelineRecipe PipelineRecipe::Parse(std::istream& in) {
  PipelineRecipe recipe;
  enum class Section { kGlobal, kInputs, kStage } section = Section::kGlobal;
  std::set<std::string> seen_keys;
  std::set<std::string> input_names;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = StripComment(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw FormatError("malformed section header", line_no);
      }
      const std::string name = Trim(std::string_view(line).substr(1, line.size() - 2));
      seen_keys.clear();
      if (name == "inputs") {
        section = Section::kInputs;
      } else {
        section = Section::kStage;
        recipe.stages.push_back({name, "", {}, line_no});
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected `key = value`", line_no);
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw FormatError("empty key", line_no);
    if (section == Section::kInputs) {
      if (!input_names.insert(key).second) {
        throw FormatError("input `" + key + "` declared twice", line_no);
      }
      recipe.inputs.emplace_back(key, value);
      continue;
    }
    if (!seen_keys.insert(key).second) {
      throw FormatError("key `" + key + "` repeated in section", line_no);
    }
    if (section == Section::kGlobal) {
      if (key != "seed") throw FormatError("unknown global key `" + key + "`", line_no);
      const auto seed = ParseNumber<std::uint64_t>(value);
      if (!seed) throw FormatError("seed must be an unsigned integer", line_no);
      recipe.seed = *seed;
      continue;
    }
    StageSpec& stage = recipe.stages.back();
    if (key == "name") {
      stage.name = value;
    } else {
      stage.params.emplace_back(key, value);
    }
  }
  for (StageSpec& stage : recipe.stages) {
    if (stage.name.empty()) {
      if (const std::string* out = stage.Get("output")) stage.name = *out;
    }
  }
  return recipe;
}

PipelineRecipe PipelineRecipe::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open recipe " + path);
  return Parse(in);
}

// ---------------------------------------------------------------------------
// Stage schema

namespace {

enum class KeyKind {
  kCorpus,      // dataset consumed line by line
  kCorpusList,  // space-separated tag:dataset pairs
  kAux,         // dataset used as a side input (table, model, scores, ...)
  kOutput,
  kPositive,
  kRatio,       // [0, 1]
  kFraction,    // (0, 1]
  kBool,
  kChoice,
  kString,
};

struct KeySpec {
  std::string_view key;
  KeyKind kind;
  bool required = false;
  std::vector<std::string_view> choices = {};
};

struct StageSchema {
  std::string_view type;
  std::vector<KeySpec> keys;
  // Outputs whose line count must equal the report's lines_written.
  bool line_outputs = true;
};

const std::vector<StageSchema>& Schemas() {
  static const std::vector<StageSchema> schemas = {
      {"normalize",
       {{"input", KeyKind::kCorpus, true}, {"output", KeyKind::kOutput, true}}},
      {"filter",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"min_tokens", KeyKind::kPositive},
        {"max_tokens", KeyKind::kPositive},
        {"cjk_filter", KeyKind::kBool},
        {"cjk_ratio", KeyKind::kRatio},
        {"ascii_ratio", KeyKind::kRatio}}},
      {"map-script",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"table", KeyKind::kAux, true},
        {"mode", KeyKind::kChoice, false, {"one-to-one", "lm-scored"}},
        {"lm", KeyKind::kAux},
        {"cap", KeyKind::kPositive}}},
      {"lm-train",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"order", KeyKind::kPositive},
        {"granularity", KeyKind::kChoice, false, {"token", "char"}}},
       false},
      {"lm-score",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"lm", KeyKind::kAux, true},
        {"granularity", KeyKind::kChoice, false, {"token", "char"}},
        {"per_token", KeyKind::kBool}}},
      {"select",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"method", KeyKind::kChoice, true, {"random", "lm", "ld", "lm-ld"}},
        {"n", KeyKind::kPositive, true},
        {"scores", KeyKind::kAux},
        {"target", KeyKind::kAux},
        {"keep_order", KeyKind::kBool},
        {"length_unit", KeyKind::kChoice, false, {"tokens", "chars"}}}},
      {"mix",
       {{"inputs", KeyKind::kCorpusList, true},
        {"output", KeyKind::kOutput, true},
        {"tags", KeyKind::kOutput, true}}},
      {"mass-gen",
       {{"input", KeyKind::kCorpus, true},
        {"output", KeyKind::kOutput, true},
        {"tags", KeyKind::kAux},
        {"mask_fraction", KeyKind::kFraction},
        {"mask_token", KeyKind::kString},
        {"language", KeyKind::kString}}},
  };
  return schemas;
}

const StageSchema* FindSchema(const std::string& type) {
  for (const auto& s : Schemas()) {
    if (s.type == type) return &s;
  }
  return nullptr;
}

const KeySpec* FindKey(const StageSchema& schema, const std::string& key) {
  for (const auto& k : schema.keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

// (tag, dataset) pairs of a mix stage's `inputs`.
std::vector<std::pair<std::string, std::string>> CorpusList(const std::string& value) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::string_view item : SplitTokens(value)) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size()) {
      throw std::invalid_argument("expected tag:dataset, got `" + std::string(item) + "`");
    }
    out.emplace_back(std::string(item.substr(0, colon)),
                     std::string(item.substr(colon + 1)));
  }
  if (out.empty()) throw std::invalid_argument("no corpora listed");
  return out;
}

std::string CheckValue(const KeySpec& spec, const std::string& value) {
  switch (spec.kind) {
    case KeyKind::kPositive: {
      const auto v = ParseNumber<std::uint64_t>(value);
      if (!v || *v == 0) return "must be a positive integer";
      break;
    }
    case KeyKind::kRatio:
    case KeyKind::kFraction: {
      const auto v = ParseNumber<double>(value);
      if (!v) return "must be a number";
      if (spec.kind == KeyKind::kRatio && !(*v >= 0 && *v <= 1)) return "must lie in [0, 1]";
      if (spec.kind == KeyKind::kFraction && !(*v > 0 && *v <= 1)) return "must lie in (0, 1]";
      break;
    }
    case KeyKind::kBool:
      if (!ParseBool(value)) return "must be true or false";
      break;
    case KeyKind::kChoice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string msg = "must be one of";
        for (auto c : spec.choices) msg += " " + std::string(c);
        return msg;
      }
      break;
    case KeyKind::kCorpusList:
      try {
        CorpusList(value);
      } catch (const std::invalid_argument& e) {
        return e.what();
      }
      break;
    default:
      if (value.empty()) return "must not be empty";
      break;
  }
  return "";
}

// Datasets consumed by a stage, split by role.
struct StageRefs {
  std::vector<std::string> corpus;
  std::vector<std::string> aux;
  std::vector<std::string> outputs;
};

StageRefs CollectRefs(const StageSpec& stage, const StageSchema& schema) {
  StageRefs refs;
  for (const auto& [key, value] : stage.params) {
    const KeySpec* spec = FindKey(schema, key);
    if (!spec) continue;
    switch (spec->kind) {
      case KeyKind::kCorpus: refs.corpus.push_back(value); break;
      case KeyKind::kAux: refs.aux.push_back(value); break;
      case KeyKind::kOutput: refs.outputs.push_back(value); break;
      case KeyKind::kCorpusList:
        try {
          for (auto& [tag, name] : CorpusList(value)) refs.corpus.push_back(name);
        } catch (const std::invalid_argument&) {
        }
        break;
      default: break;
    }
  }
  return refs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> ValidateRecipe(const PipelineRecipe& recipe) {
  std::vector<std::string> violations;
  if (recipe.stages.empty()) {
    violations.push_back("no stages");
    return violations;
  }
  // dataset -> stage types in its ancestry; external inputs have none.
  std::map<std::string, std::set<std::string>> lineage;
  // dataset -> index of the producing stage.
  std::map<std::string, std::size_t> producer;
  for (const auto& [name, path] : recipe.inputs) {
    lineage[name];
    if (path.empty()) violations.push_back("input `" + name + "` has no path");
  }
  const bool has_mix = std::any_of(recipe.stages.begin(), recipe.stages.end(),
                                   [](const StageSpec& s) { return s.type == "mix"; });
  std::set<std::string> stage_names;

  for (std::size_t si = 0; si < recipe.stages.size(); ++si) {
    const StageSpec& stage = recipe.stages[si];
    const std::string where = "stage `" + (stage.name.empty() ? stage.type : stage.name) +
                              "` (" + stage.type + ", line " + std::to_string(stage.line) + ")";
    const StageSchema* schema = FindSchema(stage.type);
    if (!schema) {
      violations.push_back(where + ": unknown stage type `" + stage.type + "`");
      continue;
    }
    if (!stage.name.empty() && !stage_names.insert(stage.name).second) {
      violations.push_back(where + ": duplicate stage name");
    }
    for (const auto& [key, value] : stage.params) {
      const KeySpec* spec = FindKey(*schema, key);
      if (!spec) {
        violations.push_back(where + ": unknown key `" + key + "`");
        continue;
      }
      const std::string problem = CheckValue(*spec, value);
      if (!problem.empty()) violations.push_back(where + ": `" + key + "` " + problem);
    }
    for (const auto& spec : schema->keys) {
      if (spec.required && !stage.Get(std::string(spec.key))) {
        violations.push_back(where + ": missing required key `" + std::string(spec.key) + "`");
      }
    }

    const StageRefs refs = CollectRefs(stage, *schema);
    std::set<std::string> input_lineage;
    for (const auto& name : refs.corpus) {
      const auto it = lineage.find(name);
      if (it == lineage.end()) {
        violations.push_back(where + ": input `" + name +
                             "` is neither a declared input nor an earlier stage's output");
        continue;
      }
      input_lineage.insert(it->second.begin(), it->second.end());
    }
    for (const auto& name : refs.aux) {
      if (!lineage.count(name)) {
        violations.push_back(where + ": input `" + name +
                             "` is neither a declared input nor an earlier stage's output");
      }
    }

    // Stage-order rules, checked on the lineage of the consumed corpora.
    const bool inputs_known = std::all_of(refs.corpus.begin(), refs.corpus.end(),
                                          [&](const std::string& n) { return lineage.count(n) > 0; });
    if (inputs_known && !refs.corpus.empty()) {
      if (stage.type == "filter" && !input_lineage.count("normalize")) {
        violations.push_back(where + ": filter requires normalized input");
      }
      if ((stage.type == "map-script" || stage.type == "select") &&
          !input_lineage.count("filter")) {
        violations.push_back(where + ": " + stage.type + " requires filtered input");
      }
      if (stage.type == "mass-gen" && has_mix && !input_lineage.count("mix")) {
        violations.push_back(where + ": mass-gen requires mixed input");
      }
    }

    // Method- and mode-specific parameters.
    if (stage.type == "filter") {
      const auto lo = ParseNumber<std::uint64_t>(stage.Get("min_tokens") ? *stage.Get("min_tokens") : "3");
      const auto hi = ParseNumber<std::uint64_t>(stage.Get("max_tokens") ? *stage.Get("max_tokens") : "80");
      if (lo && hi && *lo >= *hi) {
        violations.push_back(where + ": min_tokens must be below max_tokens");
      }
    }
    if (stage.type == "map-script") {
      const std::string* mode = stage.Get("mode");
      const bool lm_mode = mode && *mode == "lm-scored";
      if (lm_mode && !stage.Get("lm")) {
        violations.push_back(where + ": lm-scored mapping needs `lm`");
      }
      if (!lm_mode && stage.Get("lm")) {
        violations.push_back(where + ": `lm` is only used by lm-scored mapping");
      }
    }
    if (stage.type == "select") {
      if (const std::string* method = stage.Get("method")) {
        const bool scores = *method == "lm" || *method == "lm-ld";
        const bool target = *method == "ld" || *method == "lm-ld";
        if (scores != (stage.Get("scores") != nullptr)) {
          violations.push_back(where + (scores ? ": method " + *method + " needs `scores`"
                                               : ": `scores` is unused by method " + *method));
        }
        if (target != (stage.Get("target") != nullptr)) {
          violations.push_back(where + (target ? ": method " + *method + " needs `target`"
                                               : ": `target` is unused by method " + *method));
        }
        const std::string* scores_name = stage.Get("scores");
        const std::string* input = stage.Get("input");
        if (scores && scores_name && input && producer.count(*scores_name)) {
          const StageSpec& scorer = recipe.stages[producer[*scores_name]];
          const std::string* scored = scorer.Get("input");
          if (scorer.type != "lm-score") {
            violations.push_back(where + ": scores `" + *scores_name +
                                 "` are not produced by an lm-score stage");
          } else if (scored && *scored != *input) {
            violations.push_back(where + ": scores `" + *scores_name + "` were computed on `" +
                                 *scored + "`, not on `" + *input + "`");
          }
        }
      }
    }
    if (stage.type == "mass-gen") {
      if (const std::string* tags = stage.Get("tags")) {
        const auto it = producer.find(*tags);
        if (it != producer.end() && recipe.stages[it->second].type != "mix") {
          violations.push_back(where + ": tags `" + *tags + "` are not produced by a mix stage");
        }
      }
    }

    std::set<std::string> out_lineage = input_lineage;
    out_lineage.insert(stage.type);
    for (const auto& name : refs.outputs) {
      if (lineage.count(name)) {
        violations.push_back(where + ": output `" + name + "` is already defined");
        continue;
      }
      lineage[name] = out_lineage;
      producer[name] = si;
    }
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

class StageRunner {
 public:
  StageRunner(const PipelineRecipe& recipe, const RunOptions& options)
      : recipe_(recipe), options_(options) {
    for (const auto& [name, path] : recipe.inputs) {
      const fs::path p(path);
      paths_[name] = (p.is_absolute() ? p : fs::path(options.data_dir) / p).string();
    }
  }

  std::string Path(const std::string& dataset) const { return paths_.at(dataset); }

  std::string DeclareOutput(const std::string& dataset) {
    const std::string path = (fs::path(options_.work_dir) / dataset).string();
    paths_[dataset] = path;
    return path;
  }

  SelectionReport Run(const StageSpec& stage, std::uint64_t seed);

 private:
  std::string Str(const StageSpec& s, const char* key, const std::string& fallback = "") const {
    const std::string* v = s.Get(key);
    return v ? *v : fallback;
  }
  std::uint64_t Uint(const StageSpec& s, const char* key, std::uint64_t fallback) const {
    const std::string* v = s.Get(key);
    return v ? ParseNumber<std::uint64_t>(*v).value() : fallback;
  }
  double Real(const StageSpec& s, const char* key, double fallback) const {
    const std::string* v = s.Get(key);
    return v ? ParseNumber<double>(*v).value() : fallback;
  }
  bool Flag(const StageSpec& s, const char* key, bool fallback) const {
    const std::string* v = s.Get(key);
    return v ? ParseBool(*v).value() : fallback;
  }

  std::ifstream OpenIn(const std::string& dataset) const {
    std::ifstream in(Path(dataset), std::ios::binary);
    if (!in) throw Error("cannot open " + Path(dataset));
    return in;
  }
  std::ofstream OpenOut(const std::string& dataset) {
    const std::string path = DeclareOutput(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
  }
  static void Finish(std::ofstream& out, const std::string& what) {
    out.flush();
    if (!out) throw Error("write failed: " + what);
  }

  const PipelineRecipe& recipe_;
  const RunOptions& options_;
  std::map<std::string, std::string> paths_;
};

Granularity ParseGranularity(const std::string& s) {
  return s == "char" ? Granularity::kCharacter : Granularity::kToken;
}

SelectionReport StageRunner::Run(const StageSpec& stage, std::uint64_t seed) {
  const std::string input = Str(stage, "input");
  const std::string output = Str(stage, "output");
  const std::string& type = stage.type;

  if (type == "normalize") {
    auto in = OpenIn(input);
    auto out = OpenOut(output);
    SelectionReport r = RunNormalizePipeline(in, out);
    Finish(out, output);
    return r;
  }
  if (type == "filter") {
    FilterRule rule;
    rule.min_tokens = Uint(stage, "min_tokens", rule.min_tokens);
    rule.max_tokens = Uint(stage, "max_tokens", rule.max_tokens);
    rule.cjk_filter_enabled = Flag(stage, "cjk_filter", false);
    rule.cjk_min_ratio = Real(stage, "cjk_ratio", rule.cjk_min_ratio);
    rule.ascii_max_ratio = Real(stage, "ascii_ratio", rule.ascii_max_ratio);
    auto in = OpenIn(input);
    auto out = OpenOut(output);
    SelectionReport r = RunFilterPipeline(in, out, rule);
    Finish(out, output);
    return r;
  }
  if (type == "map-script") {
    const MappingTable table = MappingTable::Load(Path(Str(stage, "table")));
    MappingConfig config;
    config.candidate_cap = Uint(stage, "cap", config.candidate_cap);
    std::optional<NGramModel> lm;
    if (Str(stage, "mode", "one-to-one") == "lm-scored") {
      config.mode = MappingMode::kLmScored;
      lm = NGramModel::LoadArpa(Path(Str(stage, "lm")), Granularity::kCharacter);
      config.lm = &*lm;
    }
    auto in = OpenIn(input);
    auto out = OpenOut(output);
    SelectionReport r = RunScriptMapping(in, out, table, config);
    Finish(out, output);
    return r;
  }
  if (type == "lm-train") {
    TrainOptions options;
    options.order = Uint(stage, "order", options.order);
    options.granularity = ParseGranularity(Str(stage, "granularity", "token"));
    const std::vector<std::string> lines = ReadLinesFromFile(Path(input));
    const NGramModel model = NGramModel::Train(lines, options);
    model.SaveArpa(DeclareOutput(output));
    SelectionReport r;
    r.lines_read = lines.size();
    for (const auto& line : lines) {
      std::vector<std::string_view> units;
      SplitUnits(line, options.granularity, &units);
      if (units.empty()) {
        ++r.rejections[reason::kEmpty];
      } else {
        ++r.lines_selected;
      }
    }
    return r;
  }
  if (type == "lm-score") {
    const NGramModel model = NGramModel::LoadArpa(
        Path(Str(stage, "lm")), ParseGranularity(Str(stage, "granularity", "token")));
    const bool per_token = Flag(stage, "per_token", false);
    auto in = OpenIn(input);
    auto out = OpenOut(output);
    SelectionReport r;
    std::string line;
    while (std::getline(in, line)) {
      const SentenceScore s = model.Score(line);
      out << FormatScore(per_token ? s.per_token_log10() : s.total_log10) << '\t'
          << line << '\n';
      r.Select();
    }
    Finish(out, output);
    return r;
  }
  if (type == "select") {
    const SelectionMethod method = ParseSelectionMethod(Str(stage, "method"));
    const std::uint64_t n = Uint(stage, "n", 0);
    const LengthUnit unit =
        Str(stage, "length_unit", "tokens") == "chars" ? LengthUnit::kCharacters : LengthUnit::kTokens;
    std::optional<LengthDistribution> target;
    if (const std::string* t = stage.Get("target")) {
      auto tin = OpenIn(*t);
      target = ComputeLengthDistribution(tin, unit);
    }
    SelectionReport r;
    if (method == SelectionMethod::kRandom) {
      auto in = OpenIn(input);
      auto out = OpenOut(output);
      r = SelectRandom(in, out, n, seed);
      Finish(out, output);
    } else if (method == SelectionMethod::kLengthDistribution) {
      auto in = OpenIn(input);
      auto out = OpenOut(output);
      r = SelectLengthDistribution(in, out, *target, n, unit);
      Finish(out, output);
    } else {
      const std::vector<std::string> lines = ReadLinesFromFile(Path(input));
      const std::vector<double> scores =
          AlignScores(lines, LoadScoreFile(Path(Str(stage, "scores"))));
      auto out = OpenOut(output);
      r = method == SelectionMethod::kLmTopN
              ? SelectLmTopN(lines, scores, n, out, Flag(stage, "keep_order", false))
              : SelectLmThenLd(lines, scores, *target, n, out, unit);
      Finish(out, output);
    }
    return r;
  }
  if (type == "mix") {
    std::vector<LanguageCorpus> corpora;
    for (const auto& [tag, name] : CorpusList(Str(stage, "inputs"))) {
      corpora.push_back({tag, Path(name), 0});
    }
    auto out = OpenOut(output);
    auto tags = OpenOut(Str(stage, "tags"));
    SelectionReport r = OversampleMix(corpora, seed, out, tags);
    Finish(out, output);
    Finish(tags, Str(stage, "tags"));
    return r;
  }
  if (type == "mass-gen") {
    MaskConfig config;
    config.mask_fraction = Real(stage, "mask_fraction", config.mask_fraction);
    config.mask_token = Str(stage, "mask_token", config.mask_token);
    config.seed = seed;
    std::optional<std::vector<std::string>> tags;
    if (const std::string* t = stage.Get("tags")) tags = LoadTagFile(Path(*t));
    auto in = OpenIn(input);
    auto out = OpenOut(output);
    SelectionReport r = GenerateMassExamples(in, tags ? &*tags : nullptr,
                                             Str(stage, "language", "und"), config, out);
    Finish(out, output);
    return r;
  }
  throw Error("unknown stage type `" + type + "`");
}

}  // namespace

Manifest RunRecipe(const PipelineRecipe& recipe, const RunOptions& options) {
  Manifest manifest;
  manifest.seed = recipe.seed;
  for (const StageSpec& s : recipe.stages) {
    StageRecord rec;
    rec.name = s.name;
    rec.type = s.type;
    rec.stage_seed = DeriveSeed(recipe.seed, s.name);
    manifest.stages.push_back(std::move(rec));
  }
  const std::vector<std::string> violations = ValidateRecipe(recipe);
  if (!violations.empty()) {
    manifest.error = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) manifest.error += "; " + violations[i];
    return manifest;
  }
  std::error_code ec;
  fs::create_directories(options.work_dir, ec);
  if (ec) {
    manifest.error = "cannot create work directory " + options.work_dir + ": " + ec.message();
    return manifest;
  }

  StageRunner runner(recipe, options);
  for (std::size_t i = 0; i < recipe.stages.size(); ++i) {
    const StageSpec& stage = recipe.stages[i];
    StageRecord& rec = manifest.stages[i];
    const StageSchema& schema = *FindSchema(stage.type);
    const StageRefs refs = CollectRefs(stage, schema);
    const auto start = std::chrono::steady_clock::now();
    try {
      for (const auto& name : refs.corpus) rec.input_lines += CountLinesInFile(runner.Path(name));
      rec.report = runner.Run(stage, rec.stage_seed);
      rec.status = "ok";
    } catch (const std::exception& e) {
      rec.status = "failed";
      rec.error = e.what();
    }
    rec.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool outputs_match = true;
    for (const auto& name : refs.outputs) {
      const std::string path = runner.DeclareOutput(name);
      if (!fs::exists(path)) continue;
      OutputRecord out{name, path, Sha256File(path), CountLinesInFile(path), rec.status != "ok"};
      if (schema.line_outputs && rec.report && out.lines != rec.report->lines_written) {
        outputs_match = false;
      }
      rec.outputs.push_back(std::move(out));
    }
    rec.conservation_ok = rec.report && rec.report->Conserved() &&
                          rec.report->lines_read == rec.input_lines && outputs_match;
    if (rec.status != "ok") {
      manifest.error = "stage `" + rec.name + "` failed: " + rec.error;
      return manifest;
    }
  }
  manifest.ok = true;
  return manifest;
}

nlohmann::json Manifest::ToJson() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["ok"] = ok;
  if (!error.empty()) j["error"] = error;
  j["stages"] = nlohmann::json::array();
  for (const StageRecord& s : stages) {
    nlohmann::json js;
    js["name"] = s.name;
    js["type"] = s.type;
    js["status"] = s.status;
    if (!s.error.empty()) js["error"] = s.error;
    js["stage_seed"] = s.stage_seed;
    js["input_lines"] = s.input_lines;
    js["report"] = s.report ? s.report->ToJson() : nlohmann::json(nullptr);
    js["conservation_ok"] = s.conservation_ok;
    js["elapsed_seconds"] = s.elapsed_seconds;
    js["outputs"] = nlohmann::json::array();
    for (const OutputRecord& o : s.outputs) {
      js["outputs"].push_back({{"name", o.name},
                               {"path", o.path},
                               {"sha256", o.sha256},
                               {"lines", o.lines},
                               {"partial", o.partial}});
    }
    j["stages"].push_back(std::move(js));
  }
  return j;
}

std::map<std::string, std::string> Manifest::Checksums() const {
  std::map<std::string, std::string> out;
  for (const StageRecord& s : stages) {
    for (const OutputRecord& o : s.outputs) out[o.name] = o.sha256;
  }
  return out;
}

}  // namespace corpusprep
