// mbti: train, evaluate, predict and explore MBTI-from-text models.
//
//   mbti train --config run.toml --model nb --data mbti_1.csv --out runs/a
//   mbti evaluate --models runs/a --data mbti_1.csv
//   mbti predict --models runs/a/nb --text "some posts ||| more posts"
//   mbti eda --data mbti_1.csv --out eda/
//
// Exit codes: 0 ok, 2 bad configuration or usage, 1 any other failure.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mbti/mbti.hpp"

namespace {

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& sets) {
  std::map<std::string, std::string> kv;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw mbti::ConfigError("--set expects key=value, got '" + s + "'");
    kv[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return kv;
}

void print_eval(const mbti::FamilyEval& fe) {
  std::cout << mbti::family_name(fe.family);
  for (const auto& d : fe.dims)
    std::cout << "  " << mbti::dimension_name(d.dimension) << "=" << mbti::detail::fixed6(d.report.accuracy);
  std::cout << "  mean=" << mbti::detail::fixed6(fe.mean_accuracy)
            << "  exact16=" << mbti::detail::fixed6(fe.exact_match) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MBTI type prediction from forum posts"};
  app.require_subcommand(1);

  std::string config_path, model, data, out;
  std::uint64_t seed = 0;
  bool strip = false, stratify = false;
  std::vector<std::string> sets;
  auto* train = app.add_subcommand("train", "fit the four axis models of one family");
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--model", model, "nb, svm or rnn");
  train->add_option("--data", data, "CSV with type,posts columns (default $MBTI_DATA_DIR/mbti_1.csv)");
  train->add_option("--out", out, "output directory");
  auto* seed_opt = train->add_option("--seed", seed, "split and initialisation seed");
  train->add_flag("--strip-type-tokens", strip, "drop the 16 type codes from the text");
  train->add_flag("--stratify", stratify, "stratify the split by type code");
  train->add_option("--set", sets, "extra key=value overrides, repeatable");

  std::string models_dir, text;
  auto* evaluate = app.add_subcommand("evaluate", "re-score trained models on their test split");
  evaluate->add_option("--models", models_dir, "train output root or one family directory")->required();
  evaluate->add_option("--data", data, "CSV (default: the path recorded at train time)");
  evaluate->add_option("--out", out, "report directory (default: --models)");

  auto* predict = app.add_subcommand("predict", "predict a type code for raw text");
  predict->add_option("--models", models_dir, "family directory holding the four models")->required();
  predict->add_option("--text", text, "raw text, posts may be separated by |||")->required();

  std::size_t top_k = 100;
  auto* eda = app.add_subcommand("eda", "type distribution and term frequency tables");
  eda->add_option("--data", data, "CSV (default $MBTI_DATA_DIR/mbti_1.csv)");
  eda->add_option("--out", out, "output directory")->required();
  eda->add_option("--top-k", top_k, "terms kept per table");
  eda->add_flag("--strip-type-tokens", strip, "drop the 16 type codes from the text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      auto overrides = parse_overrides(sets);
      if (!model.empty()) overrides["model"] = model;
      if (!data.empty()) overrides["data"] = data;
      if (!out.empty()) overrides["out"] = out;
      if (seed_opt->count()) overrides["seed"] = std::to_string(seed);
      if (strip) overrides["strip_type_tokens"] = "true";
      if (stratify) overrides["stratify"] = "true";
      const auto file = config_path.empty() ? std::map<std::string, std::string>{} : mbti::load_config_file(config_path);
      const auto cfg = mbti::make_run_config(file, overrides);
      const auto result = mbti::cmd_train(cfg);
      print_eval(result.eval);
      std::cout << "wrote " << result.family_dir.string() << '\n';
    } else if (evaluate->parsed()) {
      for (const auto& fe : mbti::cmd_evaluate(models_dir, data, out)) print_eval(fe);
    } else if (predict->parsed()) {
      std::cout << mbti::prediction_json(mbti::cmd_predict(models_dir, text)).dump(2) << '\n';
    } else if (eda->parsed()) {
      const auto dist = mbti::cmd_eda({data, out, top_k, strip});
      for (const auto& [letter, n] : dist.letter_counts) std::cout << letter << ' ' << n << '\n';
    }
  } catch (const mbti::ConfigError& e) {
    std::cerr << "mbti: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mbti: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
