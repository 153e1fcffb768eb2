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

// corpusprep: corpus preparation for NMT pre-training.
//
//   corpusprep normalize < raw.txt > norm.txt
//   corpusprep filter --min-tokens 3 --max-tokens 80 < norm.txt > filt.txt
//   corpusprep map-script --table zh2ja.tsv --mode one-to-one < zh.txt
//   corpusprep lm-train --order 5 --token -o ja.arpa < in-domain.txt
//   corpusprep lm-score --lm ja.arpa < cc.txt > scores.tsv
//   corpusprep select --method lm-ld --n 20000 --scores scores.tsv
//       --target-file dev.txt < cc.txt > selected.txt
//   corpusprep mix --seed 1 ja:ja.txt en:en.txt -o mixed.txt --tags tags.tsv
//   corpusprep mass-gen --tags tags.tsv --seed 1 < mixed.txt > mass.tsv
//   corpusprep run paper.recipe --data-dir data --work-dir work

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpusprep/core.h"
#include "corpusprep/mass_gen.h"
#include "corpusprep/mixing.h"
#include "corpusprep/ngram_lm.h"
#include "corpusprep/normalize_filter.h"
#include "corpusprep/recipe.h"
#include "corpusprep/script_map.h"
#include "corpusprep/selection.h"

namespace corpusprep {
namespace {

void WriteJsonFile(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

void EmitReport(const std::string& path, const SelectionReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!path.empty()) WriteJsonFile(path, report.ToJson());
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

LengthUnit ParseUnit(const std::string& s) {
  return s == "chars" ? LengthUnit::kCharacters : LengthUnit::kTokens;
}

}  // namespace

int Main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::cin.tie(nullptr);

  CLI::App app{"Corpus preparation for NMT pre-training"};
  app.require_subcommand(1);

  std::string report_path;
  auto add_report = [&report_path](CLI::App* cmd) {
    cmd->add_option("--report", report_path, "Write a JSON run report here");
  };

  // normalize
  auto* normalize = app.add_subcommand("normalize", "NFKC-normalize stdin to stdout");
  add_report(normalize);
  normalize->callback([&] {
    EmitReport(report_path, RunNormalizePipeline(std::cin, std::cout));
  });

  // filter
  FilterRule rule;
  auto* filter = app.add_subcommand("filter", "Drop lines outside the token window or, "
                                              "with ratios given, with too little Han text");
  filter->add_option("--min-tokens", rule.min_tokens, "Inclusive minimum")->capture_default_str();
  filter->add_option("--max-tokens", rule.max_tokens, "Exclusive maximum")->capture_default_str();
  auto* cjk_opt = filter->add_option("--cjk-ratio", rule.cjk_min_ratio,
                                     "Reject below this Chinese-token fraction")
                      ->check(CLI::Range(0.0, 1.0));
  auto* ascii_opt = filter->add_option("--ascii-ratio", rule.ascii_max_ratio,
                                       "Reject above this English-token fraction")
                        ->check(CLI::Range(0.0, 1.0));
  bool cjk_flag = false;
  filter->add_flag("--cjk-filter", cjk_flag, "Enable the ratio filter with default ratios");
  add_report(filter);
  filter->callback([&] {
    rule.cjk_filter_enabled = cjk_flag || cjk_opt->count() || ascii_opt->count();
    EmitReport(report_path, RunFilterPipeline(std::cin, std::cout, rule));
  });

  // map-script
  std::string table_path, map_mode = "one-to-one", map_lm;
  std::size_t cap = 4096;
  auto* map = app.add_subcommand("map-script", "Character-level script mapping");
  map->add_option("--table", table_path, "Mapping table TSV")->required();
  map->add_option("--mode", map_mode)->check(CLI::IsMember({"one-to-one", "lm-scored"}))
      ->capture_default_str();
  map->add_option("--lm", map_lm, "Character-level ARPA model (lm-scored mode)");
  map->add_option("--cap", cap, "Max candidate combinations per token")->capture_default_str();
  add_report(map);
  map->callback([&] {
    const MappingTable table = MappingTable::Load(table_path);
    MappingConfig config;
    config.candidate_cap = cap;
    std::optional<NGramModel> lm;
    if (map_mode == "lm-scored") {
      if (map_lm.empty()) throw CLI::ValidationError("--lm", "required in lm-scored mode");
      config.mode = MappingMode::kLmScored;
      lm = NGramModel::LoadArpa(map_lm, Granularity::kCharacter);
      config.lm = &*lm;
    } else if (!map_lm.empty()) {
      throw CLI::ValidationError("--lm", "only used in lm-scored mode");
    }
    EmitReport(report_path, RunScriptMapping(std::cin, std::cout, table, config));
  });

  // lm-train
  TrainOptions train;
  std::string model_out;
  bool char_level = false, mle = false;
  auto* lm_train = app.add_subcommand("lm-train", "Train a Kneser-Ney n-gram model");
  lm_train->add_option("--order", train.order)->capture_default_str()->check(CLI::PositiveNumber);
  auto* char_flag = lm_train->add_flag("--char", char_level, "Character-level model");
  lm_train->add_flag("--token", "Token-level model (default)")->excludes(char_flag);
  lm_train->add_flag("--mle-diagnostic", mle, "Unsmoothed unigram relative frequencies");
  lm_train->add_option("-o,--output", model_out, "ARPA output path")->required();
  lm_train->callback([&] {
    train.granularity = char_level ? Granularity::kCharacter : Granularity::kToken;
    if (mle) train.smoothing = Smoothing::kMleDiagnostic;
    NGramModel::Train(std::cin, train).SaveArpa(model_out);
  });

  // lm-score
  std::string score_lm;
  bool per_token = false, score_char = false;
  auto* lm_score = app.add_subcommand("lm-score", "Score lines: `score<TAB>line`");
  lm_score->add_option("--lm", score_lm, "ARPA model")->required();
  lm_score->add_flag("--per-token", per_token, "Length-normalized log10 score");
  lm_score->add_flag("--char", score_char, "Score at character granularity");
  lm_score->callback([&] {
    const NGramModel model = NGramModel::LoadArpa(
        score_lm, score_char ? Granularity::kCharacter : Granularity::kToken);
    std::string line;
    while (std::getline(std::cin, line)) {
      const SentenceScore s = model.Score(line);
      std::cout << FormatScore(per_token ? s.per_token_log10() : s.total_log10) << '\t'
                << line << '\n';
    }
  });

  // select
  std::string method_name, target_dist, target_file, scores_path, unit_name = "tokens";
  std::uint64_t select_n = 0, select_seed = 0;
  bool keep_order = false;
  auto* select = app.add_subcommand("select", "Data selection");
  select->add_option("--method", method_name)->required()
      ->check(CLI::IsMember({"random", "lm", "ld", "lm-ld"}));
  select->add_option("--n", select_n, "Number of lines to select")->required();
  auto* seed_opt = select->add_option("--seed", select_seed);
  auto* dist_opt = select->add_option("--target-dist", target_dist, "Length histogram TSV");
  select->add_option("--target-file", target_file, "Corpus whose length histogram is the target")
      ->excludes(dist_opt);
  select->add_option("--scores", scores_path, "lm-score output aligned with stdin");
  select->add_flag("--keep-order", keep_order, "Emit top-N lines in file order");
  select->add_option("--length-unit", unit_name)->check(CLI::IsMember({"tokens", "chars"}))
      ->capture_default_str();
  add_report(select);
  select->callback([&] {
    const LengthUnit unit = ParseUnit(unit_name);
    SelectionSpec spec;
    spec.method = ParseSelectionMethod(method_name);
    spec.select_num = select_n;
    if (seed_opt->count()) spec.seed = select_seed;
    if (!target_dist.empty()) {
      std::ifstream in(target_dist, std::ios::binary);
      if (!in) throw Error("cannot open " + target_dist);
      spec.target = LengthDistribution::ReadTsv(in);
    } else if (!target_file.empty()) {
      std::ifstream in(target_file, std::ios::binary);
      if (!in) throw Error("cannot open " + target_file);
      spec.target = ComputeLengthDistribution(in, unit);
    }
    if (!scores_path.empty()) spec.score_file = scores_path;
    spec.Validate();

    SelectionReport report;
    switch (spec.method) {
      case SelectionMethod::kRandom:
        report = SelectRandom(std::cin, std::cout, spec.select_num, *spec.seed);
        break;
      case SelectionMethod::kLengthDistribution:
        report = SelectLengthDistribution(std::cin, std::cout, *spec.target,
                                          spec.select_num, unit);
        break;
      case SelectionMethod::kLmTopN:
      case SelectionMethod::kLmThenLd: {
        const std::vector<std::string> lines = ReadLines(std::cin);
        const std::vector<double> scores = AlignScores(lines, LoadScoreFile(*spec.score_file));
        report = spec.method == SelectionMethod::kLmTopN
                     ? SelectLmTopN(lines, scores, spec.select_num, std::cout, keep_order)
                     : SelectLmThenLd(lines, scores, *spec.target, spec.select_num,
                                      std::cout, unit);
        break;
      }
    }
    EmitReport(report_path, report);
  });

  // mix
  std::vector<std::string> mix_args;
  std::uint64_t mix_seed = 0;
  std::string mix_out, mix_tags;
  auto* mix = app.add_subcommand("mix", "Oversample corpora to the largest and shuffle");
  mix->add_option("--seed", mix_seed)->required();
  mix->add_option("corpora", mix_args, "tag:path pairs")->required();
  mix->add_option("-o,--output", mix_out)->required();
  mix->add_option("--tags", mix_tags, "Sidecar `line_index<TAB>tag` output")->required();
  add_report(mix);
  mix->callback([&] {
    std::vector<LanguageCorpus> corpora;
    for (const auto& arg : mix_args) corpora.push_back(ParseCorpusArg(arg));
    auto out = OpenOutput(mix_out);
    auto tags = OpenOutput(mix_tags);
    const SelectionReport report = OversampleMix(corpora, mix_seed, out, tags);
    if (!out.flush() || !tags.flush()) throw Error("write failed");
    EmitReport(report_path, report);
  });

  // mass-gen
  MaskConfig mask;
  std::string tags_path, language = "und";
  auto* mass = app.add_subcommand("mass-gen", "Emit masked span prediction examples");
  mass->add_option("--tags", tags_path, "Tag sidecar from `mix`");
  mass->add_option("--language", language, "Tag when no sidecar is given")->capture_default_str();
  mass->add_option("--mask-fraction", mask.mask_fraction)->capture_default_str();
  mass->add_option("--mask-token", mask.mask_token)->capture_default_str();
  mass->add_option("--seed", mask.seed)->capture_default_str();
  add_report(mass);
  mass->callback([&] {
    std::optional<std::vector<std::string>> tags;
    if (!tags_path.empty()) tags = LoadTagFile(tags_path);
    EmitReport(report_path, GenerateMassExamples(std::cin, tags ? &*tags : nullptr, language,
                                                 mask, std::cout));
  });

  // stats
  std::string stats_unit = "tokens", dist_out;
  auto* stats = app.add_subcommand("stats", "Length statistics of stdin as JSON");
  stats->add_option("--length-unit", stats_unit)->check(CLI::IsMember({"tokens", "chars"}))
      ->capture_default_str();
  stats->add_option("--dist", dist_out, "Also write the length histogram TSV here");
  stats->callback([&] {
    const LengthDistribution dist = ComputeLengthDistribution(std::cin, ParseUnit(stats_unit));
    if (!dist_out.empty()) {
      auto out = OpenOutput(dist_out);
      dist.WriteTsv(out);
    }
    std::cout << Summarize(dist).ToJson().dump(2) << '\n';
  });

  // run
  std::string recipe_path, manifest_path;
  RunOptions run_options;
  int run_status = 0;
  auto* run = app.add_subcommand("run", "Execute a pipeline recipe");
  run->add_option("recipe", recipe_path)->required();
  run->add_option("--data-dir", run_options.data_dir)->capture_default_str();
  run->add_option("--work-dir", run_options.work_dir)->capture_default_str();
  run->add_option("--manifest", manifest_path, "Default: <work-dir>/manifest.json");
  run->callback([&] {
    const Manifest manifest = RunRecipe(PipelineRecipe::Load(recipe_path), run_options);
    if (manifest_path.empty()) manifest_path = run_options.work_dir + "/manifest.json";
    const auto manifest_dir = std::filesystem::path(manifest_path).parent_path();
    if (!manifest_dir.empty()) std::filesystem::create_directories(manifest_dir);
    WriteJsonFile(manifest_path, manifest.ToJson());
    for (const auto& s : manifest.stages) {
      std::cerr << s.status << '\t' << s.name << '\t';
      if (s.report) {
        std::cerr << s.report->lines_read << " read, " << s.report->lines_selected
                  << " selected" << (s.conservation_ok ? "" : " (conservation FAILED)");
      }
      std::cerr << '\n';
    }
    if (!manifest.ok) {
      std::cerr << "error: " << manifest.error << '\n';
      run_status = 1;
    }
  });

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a recipe without running it");
  validate->add_option("recipe", validate_path)->required();
  validate->callback([&] {
    const PipelineRecipe recipe = PipelineRecipe::Load(validate_path);
    const auto violations = ValidateRecipe(recipe);
    for (const auto& v : violations) std::cerr << "violation: " << v << '\n';
    if (violations.empty()) {
      std::cout << "ok: " << recipe.stages.size() << " stages\n";
    }
    run_status = violations.empty() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout.flush();
  if (!std::cout) {
    std::cerr << "error: write to stdout failed\n";
    return 1;
  }
  return run_status;
}

}  // namespace corpusprep

int main(int argc, char** argv) { return corpusprep::Main(argc, argv); }
