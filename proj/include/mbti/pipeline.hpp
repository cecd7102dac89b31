#pragma once

// End-to-end commands: ingest -> preprocess -> features -> fit per axis ->
// evaluate -> write. Every command writes only below its output directory.
//
// Output layout of `train` (root = --out):
//   <root>/<family>/vocab.tsv           vocabulary the models were fit on
//   <root>/<family>/<DIM>.model         one container per axis
//   <root>/<family>/report_<DIM>.json   classification report per axis
//   <root>/<family>/confusion.csv       dimension,tp,fp,fn,tn
//   <root>/<family>/summary.json        numbers behind the table rows
//   <root>/<family>/loss_<DIM>.csv      rnn only: epoch,mean_bce
//   <root>/<family>/run_config.json
//   <root>/metrics.csv                  model,IE,NS,TF,JP,mean,exact_match_16 (accuracy)
//   <root>/f1.csv                       model,average,IE,NS,TF,JP,mean

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "container.hpp"
#include "corpus.hpp"
#include "eda.hpp"
#include "error.hpp"
#include "features.hpp"
#include "metrics.hpp"
#include "naive_bayes.hpp"
#include "rnn.hpp"
#include "svm.hpp"
#include "textprep.hpp"

namespace mbti {

namespace fs = std::filesystem;

struct PreparedCorpus {
  Dataset dataset;
  std::vector<TokenList> docs;  // one per record, all posts joined
  std::array<std::vector<std::uint8_t>, 4> labels;
};

inline PreparedCorpus prepare_corpus(Dataset ds, const PreprocessOptions& opts) {
  PreparedCorpus pc;
  const auto prep = Preprocessor::standard(opts);
  pc.docs.reserve(ds.size());
  for (const auto& r : ds.records) pc.docs.push_back(prep.document(r));
  for (Dimension d : kDimensions) pc.labels[static_cast<std::size_t>(d)] = dimension_labels(ds, d);
  pc.dataset = std::move(ds);
  return pc;
}

inline Split make_split(const Dataset& ds, const RunConfig& cfg) {
  return cfg.stratify ? split_stratified(ds, cfg.ratio, cfg.seed) : split(ds, cfg.ratio, cfg.seed);
}

template <typename T>
std::vector<T> gather(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

inline Vocabulary family_vocabulary(ModelFamily family, const std::vector<TokenList>& train_docs, const RunConfig& cfg) {
  if (family == ModelFamily::RNN) return build_vocab(train_docs, cfg.max_terms);
  return build_vocab(train_docs);
}

inline FeatureMatrix sparse_features(ModelFamily family, const std::vector<TokenList>& docs, const Vocabulary& vocab,
                                     const RunConfig& cfg) {
  FeatureMatrix counts = bow_matrix(docs, vocab);
  const bool tfidf = family == ModelFamily::SVM || (family == ModelFamily::NB && cfg.nb_tfidf);
  return tfidf ? tfidf_transform(counts, vocab) : counts;
}

inline RNNConfig rnn_config_for(const RunConfig& cfg, const Vocabulary& vocab, Dimension d) {
  RNNConfig rc = cfg.rnn;
  rc.vocab_size = std::max<std::size_t>(1, vocab.size());
  rc.max_len = cfg.max_len;
  rc.seed = cfg.seed + static_cast<std::uint64_t>(d);
  return rc;
}

struct Scores {
  std::vector<double> values;  // P(label 1) for nb/rnn, margin for svm
  std::vector<std::uint8_t> labels;
};

// Runs one container over preprocessed documents.
inline Scores score_documents(const ModelContainer& c, const Vocabulary& vocab, const std::vector<TokenList>& docs) {
  Scores s;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NBModel>) {
          const auto x = sparse_features(ModelFamily::NB, docs, vocab, c.config);
          for (const auto& row : x.rows) {
            s.values.push_back(nb_probability(m, row));
            s.labels.push_back(nb_predict(m, row));
          }
        } else if constexpr (std::is_same_v<M, SVMModel>) {
          const auto x = sparse_features(ModelFamily::SVM, docs, vocab, c.config);
          for (const auto& row : x.rows) {
            const double margin = svm_decision(m, row);
            s.values.push_back(margin);
            s.labels.push_back(margin > 0.0 ? 1 : 0);
          }
        } else {
          const auto seq = encode_batch(docs, vocab, m.config.max_len);
          for (auto p : rnn_probabilities(m, seq)) {
            s.values.push_back(static_cast<double>(p));
            s.labels.push_back(static_cast<double>(p) > c.config.rnn_threshold ? 1 : 0);
          }
        }
      },
      c.model);
  return s;
}

struct DimensionEval {
  Dimension dimension = Dimension::IE;
  EvalReport report;
  double majority_baseline = 0.0;  // accuracy of always predicting the test majority
};

struct FamilyEval {
  ModelFamily family = ModelFamily::NB;
  std::array<DimensionEval, 4> dims;
  double mean_accuracy = 0.0;
  double exact_match = 0.0;
  double mean_macro_f1 = 0.0;
  double mean_weighted_f1 = 0.0;
};

inline FamilyEval evaluate_predictions(ModelFamily family, const std::array<std::vector<std::uint8_t>, 4>& trues,
                                       const std::array<std::vector<std::uint8_t>, 4>& preds) {
  FamilyEval fe;
  fe.family = family;
  for (Dimension d : kDimensions) {
    const auto k = static_cast<std::size_t>(d);
    auto& de = fe.dims[k];
    de.dimension = d;
    de.report = report(confusion(trues[k], preds[k]));
    std::size_t ones = 0;
    for (auto v : trues[k]) ones += v;
    const auto n = static_cast<double>(trues[k].size());
    de.majority_baseline = std::max(static_cast<double>(ones), n - static_cast<double>(ones)) / n;
    fe.mean_accuracy += de.report.accuracy / 4.0;
    fe.mean_macro_f1 += de.report.macro.f1 / 4.0;
    fe.mean_weighted_f1 += de.report.weighted.f1 / 4.0;
  }
  fe.exact_match = exact_match_16(preds, trues);
  return fe;
}

inline FamilyEval evaluate_family(const std::array<ModelContainer, 4>& models, const Vocabulary& vocab,
                                  const PreparedCorpus& corpus, const Split& sp) {
  const auto test_docs = gather(corpus.docs, sp.test_indices);
  std::array<std::vector<std::uint8_t>, 4> trues, preds;
  for (Dimension d : kDimensions) {
    const auto k = static_cast<std::size_t>(d);
    trues[k] = gather(corpus.labels[k], sp.test_indices);
    preds[k] = score_documents(models[k], vocab, test_docs).labels;
  }
  return evaluate_predictions(models[0].family(), trues, preds);
}

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline nlohmann::json class_json(const ClassMetrics& c) {
  return {{"precision", c.precision},
          {"recall", c.recall},
          {"f1", c.f1},
          {"support", c.support},
          {"precision_undefined", c.precision_undefined},
          {"recall_undefined", c.recall_undefined},
          {"f1_undefined", c.f1_undefined}};
}

inline nlohmann::json report_json(const DimensionEval& de) {
  const auto& r = de.report;
  const auto k = static_cast<std::size_t>(de.dimension);
  return {{"dimension", std::string(dimension_name(de.dimension))},
          {"confusion", {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"fn", r.cm.fn}, {"tn", r.cm.tn}}},
          {"classes",
           {{std::string(1, kPositiveLetter[k]), class_json(r.per_class[1])},
            {std::string(1, kNegativeLetter[k]), class_json(r.per_class[0])}}},
          {"accuracy", r.accuracy},
          {"macro_avg", {{"precision", r.macro.precision}, {"recall", r.macro.recall}, {"f1", r.macro.f1}}},
          {"weighted_avg", {{"precision", r.weighted.precision}, {"recall", r.weighted.recall}, {"f1", r.weighted.f1}}},
          {"majority_baseline", de.majority_baseline}};
}

inline nlohmann::json summary_json(const FamilyEval& fe) {
  nlohmann::json dims = nlohmann::json::object();
  for (const auto& de : fe.dims)
    dims[std::string(dimension_name(de.dimension))] = {{"accuracy", de.report.accuracy},
                                                       {"macro_f1", de.report.macro.f1},
                                                       {"weighted_f1", de.report.weighted.f1},
                                                       {"majority_baseline", de.majority_baseline}};
  return {{"model", family_name(fe.family)},
          {"dimensions", dims},
          {"mean_accuracy", fe.mean_accuracy},
          {"exact_match_16", fe.exact_match},
          {"mean_macro_f1", fe.mean_macro_f1},
          {"mean_weighted_f1", fe.mean_weighted_f1}};
}

}  // namespace detail

inline void write_family_reports(const fs::path& dir, const FamilyEval& fe) {
  std::ostringstream cm;
  cm << "dimension,tp,fp,fn,tn\n";
  for (const auto& de : fe.dims) {
    const auto name = std::string(dimension_name(de.dimension));
    detail::write_text(dir / ("report_" + name + ".json"), detail::report_json(de).dump(2) + "\n");
    const auto& c = de.report.cm;
    cm << name << ',' << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << '\n';
  }
  detail::write_text(dir / "confusion.csv", cm.str());
  detail::write_text(dir / "summary.json", detail::summary_json(fe).dump(2) + "\n");
}

// metrics.csv and f1.csv from summary.json documents, one row group per model.
inline void write_tables(const fs::path& root, const std::vector<nlohmann::json>& summaries) {
  std::ostringstream acc, f1;
  acc << "model,IE,NS,TF,JP,mean,exact_match_16\n";
  f1 << "model,average,IE,NS,TF,JP,mean\n";
  for (const auto& s : summaries) {
    const auto model = s.at("model").get<std::string>();
    const auto& dims = s.at("dimensions");
    acc << model;
    for (Dimension d : kDimensions) acc << ',' << detail::fixed6(dims.at(std::string(dimension_name(d))).at("accuracy").get<double>());
    acc << ',' << detail::fixed6(s.at("mean_accuracy").get<double>()) << ','
        << detail::fixed6(s.at("exact_match_16").get<double>()) << '\n';
    for (const char* avg : {"macro", "weighted"}) {
      f1 << model << ',' << avg;
      for (Dimension d : kDimensions)
        f1 << ',' << detail::fixed6(dims.at(std::string(dimension_name(d))).at(std::string(avg) + "_f1").get<double>());
      f1 << ',' << detail::fixed6(s.at(std::string("mean_") + avg + "_f1").get<double>()) << '\n';
    }
  }
  detail::write_text(root / "metrics.csv", acc.str());
  detail::write_text(root / "f1.csv", f1.str());
}

// Tables over every <root>/<family>/summary.json, rows ordered nb, svm, rnn.
inline void write_tables(const fs::path& root) {
  std::vector<nlohmann::json> summaries;
  for (ModelFamily fam : {ModelFamily::NB, ModelFamily::SVM, ModelFamily::RNN}) {
    const auto path = root / family_name(fam) / "summary.json";
    if (fs::exists(path)) summaries.push_back(nlohmann::json::parse(detail::read_text(path)));
  }
  write_tables(root, summaries);
}

inline std::string model_file_name(Dimension d) { return std::string(dimension_name(d)) + ".model"; }

namespace detail {

// Runs `fn`, prefixing any library error with the stage name.
template <typename F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(std::string("stage ") + name + ": " + e.what());
  }
}

template <typename T>
ModelPayload fit_rnn(const RNNConfig& rc, const SequenceBatch& x, std::span<const std::uint8_t> y,
                     std::vector<double>& history) {
  auto model = rnn_init<T>(rc);
  history = rnn_fit(model, x, y).mean_bce;
  return model;
}

}  // namespace detail

struct TrainResult {
  FamilyEval eval;
  fs::path family_dir;
};

// Fits the four axis models of cfg.model on the shared split and writes the
// layout documented at the top of this file. On failure nothing new is left
// behind in cfg.out.
inline TrainResult cmd_train(RunConfig cfg) {
  cfg.validate();
  cfg.data = resolve_data_path(cfg.data);
  if (!fs::exists(cfg.data)) throw ConfigError("dataset '" + cfg.data + "' does not exist");
  if (cfg.out.empty()) throw ConfigError("no output directory given");

  const fs::path root(cfg.out);
  const std::string family = family_name(cfg.model);
  const fs::path staging = root / ("." + family + ".partial");
  const fs::path final_dir = root / family;
  const bool root_existed = fs::exists(root);

  try {
    auto ds = detail::stage("ingest", [&] { return load_dataset(cfg.data); });
    const auto corpus = detail::stage("preprocess", [&] {
      return prepare_corpus(std::move(ds), PreprocessOptions{cfg.strip_type_tokens});
    });
    const auto sp = detail::stage("split", [&] { return make_split(corpus.dataset, cfg); });
    const auto train_docs = gather(corpus.docs, sp.train_indices);
    const auto vocab = detail::stage("features", [&] { return family_vocabulary(cfg.model, train_docs, cfg); });

    std::array<ModelContainer, 4> models;
    std::array<std::vector<double>, 4> histories;
    detail::stage("fit", [&] {
      std::optional<FeatureMatrix> x;
      std::optional<SequenceBatch> seq;
      if (cfg.model == ModelFamily::RNN)
        seq = encode_batch(train_docs, vocab, cfg.max_len);
      else
        x = sparse_features(cfg.model, train_docs, vocab, cfg);
      for (Dimension d : kDimensions) {
        const auto k = static_cast<std::size_t>(d);
        const auto y = gather(corpus.labels[k], sp.train_indices);
        auto& c = models[k];
        c.dimension = d;
        c.vocab_hash = vocab.hash();
        c.config = cfg;
        switch (cfg.model) {
          case ModelFamily::NB: c.model = nb_fit(*x, y, cfg.nb_alpha); break;
          case ModelFamily::SVM:
            c.model = svm_fit(*x, y, SVMOptions{cfg.svm_c, cfg.svm_epochs, cfg.seed + k, true, {}});
            break;
          case ModelFamily::RNN: {
            const auto rc = rnn_config_for(cfg, vocab, d);
            c.model = cfg.rnn_double ? detail::fit_rnn<double>(rc, *seq, y, histories[k])
                                     : detail::fit_rnn<float>(rc, *seq, y, histories[k]);
            break;
          }
        }
      }
      return 0;
    });

    const auto eval = detail::stage("evaluate", [&] { return evaluate_family(models, vocab, corpus, sp); });

    detail::stage("write", [&] {
      fs::remove_all(staging);
      fs::create_directories(staging);
      vocab.save((staging / "vocab.tsv").string());
      for (const auto& c : models) save_model(c, (staging / model_file_name(c.dimension)).string());
      if (cfg.model == ModelFamily::RNN)
        for (Dimension d : kDimensions) {
          std::ostringstream os;
          os << "epoch,mean_bce\n";
          const auto& h = histories[static_cast<std::size_t>(d)];
          for (std::size_t e = 0; e < h.size(); ++e) os << (e + 1) << ',' << detail::fixed6(h[e]) << '\n';
          detail::write_text(staging / ("loss_" + std::string(dimension_name(d)) + ".csv"), os.str());
        }
      detail::write_text(staging / "run_config.json", cfg.to_json().dump(2) + "\n");
      write_family_reports(staging, eval);
      fs::remove_all(final_dir);
      fs::rename(staging, final_dir);
      write_tables(root);
      return 0;
    });
    return {eval, final_dir};
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    if (!root_existed) fs::remove_all(root, ec);
    throw;
  }
}

struct LoadedFamily {
  fs::path dir;
  Vocabulary vocab;
  std::array<ModelContainer, 4> models;
};

// Loads the four containers and vocabulary of one family directory and
// checks they belong together.
inline LoadedFamily load_family(const fs::path& dir) {
  LoadedFamily lf;
  lf.dir = dir;
  for (Dimension d : kDimensions)
    if (!fs::exists(dir / model_file_name(d)))
      throw Error("missing model for dimension " + std::string(dimension_name(d)) + " in '" + dir.string() + "'");
  lf.vocab = Vocabulary::load((dir / "vocab.tsv").string());
  for (Dimension d : kDimensions) {
    auto c = load_model((dir / model_file_name(d)).string());
    if (c.dimension != d)
      throw Error((dir / model_file_name(d)).string() + " holds a " + std::string(dimension_name(c.dimension)) + " model");
    check_vocabulary(c, lf.vocab);
    lf.models[static_cast<std::size_t>(d)] = std::move(c);
  }
  const auto fam = lf.models[0].family();
  for (const auto& c : lf.models)
    if (c.family() != fam) throw Error("models in '" + dir.string() + "' mix families");
  return lf;
}

// A directory holding the containers directly, or a train root with one
// subdirectory per family.
inline std::vector<fs::path> find_family_dirs(const fs::path& models_dir) {
  if (fs::exists(models_dir / "vocab.tsv") || fs::exists(models_dir / model_file_name(Dimension::IE))) return {models_dir};
  std::vector<fs::path> dirs;
  for (ModelFamily fam : {ModelFamily::NB, ModelFamily::SVM, ModelFamily::RNN})
    if (fs::is_directory(models_dir / family_name(fam))) dirs.push_back(models_dir / family_name(fam));
  if (dirs.empty()) throw Error("no models found under '" + models_dir.string() + "'");
  return dirs;
}

// Re-evaluates trained families on the test split their training config
// defines. Reports are written below `out` (one subdirectory per family)
// together with metrics.csv and f1.csv.
inline std::vector<FamilyEval> cmd_evaluate(const std::string& models_dir, const std::string& data,
                                            const std::string& out) {
  std::vector<FamilyEval> evals;
  const fs::path out_root = out.empty() ? fs::path(models_dir) : fs::path(out);
  const auto dirs = find_family_dirs(models_dir);
  const bool single = dirs.size() == 1 && dirs[0] == fs::path(models_dir);
  for (const auto& dir : dirs) {
    const auto lf = load_family(dir);
    const auto& cfg = lf.models[0].config;
    const auto path = resolve_data_path(data.empty() ? cfg.data : data);
    auto corpus = prepare_corpus(load_dataset(path), PreprocessOptions{cfg.strip_type_tokens});
    const auto sp = make_split(corpus.dataset, cfg);
    auto fe = evaluate_family(lf.models, lf.vocab, corpus, sp);
    const fs::path target = single ? out_root : out_root / family_name(fe.family);
    fs::create_directories(target);
    write_family_reports(target, fe);
    evals.push_back(fe);
  }
  std::vector<nlohmann::json> summaries;
  for (const auto& fe : evals) summaries.push_back(detail::summary_json(fe));
  write_tables(out_root, summaries);
  return evals;
}

struct DimensionPrediction {
  Dimension dimension = Dimension::IE;
  double score = 0.0;  // probability of the I/N/T/J letter, or SVM margin
  std::uint8_t label = 0;
};

struct Prediction {
  std::string type_code;
  ModelFamily family = ModelFamily::NB;
  std::array<DimensionPrediction, 4> dims;
};

inline Prediction predict_text(const LoadedFamily& lf, const std::string& text) {
  const auto& cfg = lf.models[0].config;
  const auto prep = Preprocessor::standard(PreprocessOptions{cfg.strip_type_tokens});
  const std::vector<TokenList> docs{prep(text)};
  Prediction p;
  p.family = lf.models[0].family();
  DimensionLabels labels;
  for (Dimension d : kDimensions) {
    const auto k = static_cast<std::size_t>(d);
    const auto s = score_documents(lf.models[k], lf.vocab, docs);
    p.dims[k] = {d, s.values[0], s.labels[0]};
    labels[d] = s.labels[0];
  }
  p.type_code = compose_type(labels);
  return p;
}

inline Prediction cmd_predict(const std::string& models_dir, const std::string& text) {
  const auto dirs = find_family_dirs(models_dir);
  if (dirs.size() != 1)
    throw Error("'" + models_dir + "' holds several model families; point --models at one of them");
  return predict_text(load_family(dirs[0]), text);
}

inline nlohmann::json prediction_json(const Prediction& p) {
  nlohmann::json dims = nlohmann::json::object();
  for (const auto& d : p.dims)
    dims[std::string(dimension_name(d.dimension))] = {{"score", d.score}, {"label", d.label}};
  return {{"type", p.type_code}, {"model", family_name(p.family)}, {"dimensions", dims}};
}

struct EdaOptions {
  std::string data;
  std::string out;
  std::size_t top_k = 100;
  bool strip_type_tokens = false;
};

// distribution.json plus one term<TAB>count file per filter: terms_all.tsv,
// terms_<TYPE>.tsv for the 16 codes and terms_<L>.tsv for the 8 letters.
inline TypeDistribution cmd_eda(const EdaOptions& opts) {
  if (opts.top_k < 1) throw ConfigError("top_k must be >= 1");
  if (opts.out.empty()) throw ConfigError("no output directory given");
  const auto path = resolve_data_path(opts.data);
  const auto corpus = prepare_corpus(load_dataset(path), PreprocessOptions{opts.strip_type_tokens});
  const auto dist = type_distribution(corpus.dataset);

  const fs::path root(opts.out);
  fs::create_directories(root);
  nlohmann::json types = nlohmann::json::object(), letters = nlohmann::json::object();
  for (const auto& [code, n] : dist.type_counts) types[code] = {{"count", n}, {"proportion", dist.type_proportion(code)}};
  for (const auto& [letter, n] : dist.letter_counts)
    letters[std::string(1, letter)] = {{"count", n}, {"proportion", dist.letter_proportion(letter)}};
  detail::write_text(root / "distribution.json",
                     nlohmann::json{{"total", dist.total}, {"types", types}, {"letters", letters}}.dump(2) + "\n");

  auto write_terms = [&](const std::optional<std::string>& filter) {
    std::ostringstream os;
    for (const auto& [term, count] : term_frequencies(corpus.dataset, corpus.docs, filter, opts.top_k))
      os << term << '\t' << count << '\n';
    detail::write_text(root / ("terms_" + (filter ? *filter : std::string("all")) + ".tsv"), os.str());
  };
  write_terms(std::nullopt);
  for (const auto& code : all_type_codes()) write_terms(code);
  for (const auto& [letter, n] : dist.letter_counts) write_terms(std::string(1, letter));
  return dist;
}

}  // namespace mbti
