#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "error.hpp"
#include "rnn.hpp"

namespace mbti {

enum class ModelFamily { NB, SVM, RNN };

inline std::string family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::NB: return "nb";
    case ModelFamily::SVM: return "svm";
    case ModelFamily::RNN: return "rnn";
  }
  return "?";
}

inline ModelFamily parse_family(const std::string& s) {
  if (s == "nb") return ModelFamily::NB;
  if (s == "svm") return ModelFamily::SVM;
  if (s == "rnn") return ModelFamily::RNN;
  throw ConfigError("unknown model family '" + s + "' (expected nb, svm or rnn)");
}

struct RunConfig {
  std::string data;
  double ratio = 0.75;
  std::uint64_t seed = 42;
  bool stratify = false;
  bool strip_type_tokens = false;
  std::size_t max_terms = 72000;  // sequence path only; BoW/TF-IDF vocabularies are uncapped
  std::size_t max_len = 200;
  ModelFamily model = ModelFamily::NB;
  std::string out;

  double nb_alpha = 1.0;
  bool nb_tfidf = false;

  double svm_c = 1.0;
  int svm_epochs = 20;

  RNNConfig rnn;  // vocab_size, max_len and seed are filled in at train time
  bool rnn_double = true;
  double rnn_threshold = 0.5;

  // Applies one `key = value` setting. Unknown keys and unparsable values throw.
  void set(const std::string& key, const std::string& raw) {
    const std::string value = unquote(raw);
    if (key == "data") data = value;
    else if (key == "ratio") ratio = to_double(key, value);
    else if (key == "seed") seed = to_uint(key, value);
    else if (key == "stratify") stratify = to_bool(key, value);
    else if (key == "strip_type_tokens") strip_type_tokens = to_bool(key, value);
    else if (key == "max_terms") max_terms = to_uint(key, value);
    else if (key == "max_len") max_len = to_uint(key, value);
    else if (key == "model") model = parse_family(value);
    else if (key == "out") out = value;
    else if (key == "nb.alpha") nb_alpha = to_double(key, value);
    else if (key == "nb.tfidf") nb_tfidf = to_bool(key, value);
    else if (key == "svm.c") svm_c = to_double(key, value);
    else if (key == "svm.epochs") svm_epochs = static_cast<int>(to_uint(key, value));
    else if (key == "rnn.embed_dim") rnn.embed_dim = to_uint(key, value);
    else if (key == "rnn.conv_filters") rnn.conv_filters = to_uint(key, value);
    else if (key == "rnn.conv_kernel") rnn.conv_kernel = to_uint(key, value);
    else if (key == "rnn.lstm_hidden") rnn.lstm_hidden = to_uint(key, value);
    else if (key == "rnn.learning_rate") rnn.learning_rate = to_double(key, value);
    else if (key == "rnn.beta1") rnn.beta1 = to_double(key, value);
    else if (key == "rnn.beta2") rnn.beta2 = to_double(key, value);
    else if (key == "rnn.epsilon") rnn.epsilon = to_double(key, value);
    else if (key == "rnn.batch_size") rnn.batch_size = to_uint(key, value);
    else if (key == "rnn.epochs") rnn.epochs = static_cast<int>(to_uint(key, value));
    else if (key == "rnn.threshold") rnn_threshold = to_double(key, value);
    else if (key == "rnn.precision") {
      if (value != "double" && value != "float")
        throw ConfigError("rnn.precision must be 'double' or 'float', got '" + value + "'");
      rnn_double = value == "double";
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  void validate() const {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("ratio must lie in (0, 1), got " + std::to_string(ratio));
    if (max_terms < 1) throw ConfigError("max_terms must be >= 1");
    if (max_len < 1) throw ConfigError("max_len must be >= 1");
    if (!(nb_alpha > 0.0)) throw ConfigError("nb.alpha must be positive");
    if (!(svm_c > 0.0)) throw ConfigError("svm.c must be positive");
    if (svm_epochs < 1) throw ConfigError("svm.epochs must be >= 1");
    RNNConfig probe = rnn;
    probe.vocab_size = 1;
    probe.max_len = max_len;
    probe.validate();
  }

  nlohmann::json to_json() const {
    return {
        {"data", data},
        {"ratio", ratio},
        {"seed", seed},
        {"stratify", stratify},
        {"strip_type_tokens", strip_type_tokens},
        {"max_terms", max_terms},
        {"max_len", max_len},
        {"model", family_name(model)},
        {"nb", {{"alpha", nb_alpha}, {"tfidf", nb_tfidf}}},
        {"svm", {{"c", svm_c}, {"epochs", svm_epochs}}},
        {"rnn",
         {{"embed_dim", rnn.embed_dim},
          {"conv_filters", rnn.conv_filters},
          {"conv_kernel", rnn.conv_kernel},
          {"lstm_hidden", rnn.lstm_hidden},
          {"learning_rate", rnn.learning_rate},
          {"beta1", rnn.beta1},
          {"beta2", rnn.beta2},
          {"epsilon", rnn.epsilon},
          {"batch_size", rnn.batch_size},
          {"epochs", rnn.epochs},
          {"precision", rnn_double ? "double" : "float"},
          {"threshold", rnn_threshold}}},
    };
  }

  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    c.data = j.at("data").get<std::string>();
    c.ratio = j.at("ratio").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.stratify = j.at("stratify").get<bool>();
    c.strip_type_tokens = j.at("strip_type_tokens").get<bool>();
    c.max_terms = j.at("max_terms").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.model = parse_family(j.at("model").get<std::string>());
    c.nb_alpha = j.at("nb").at("alpha").get<double>();
    c.nb_tfidf = j.at("nb").at("tfidf").get<bool>();
    c.svm_c = j.at("svm").at("c").get<double>();
    c.svm_epochs = j.at("svm").at("epochs").get<int>();
    const auto& r = j.at("rnn");
    c.rnn.embed_dim = r.at("embed_dim").get<std::size_t>();
    c.rnn.conv_filters = r.at("conv_filters").get<std::size_t>();
    c.rnn.conv_kernel = r.at("conv_kernel").get<std::size_t>();
    c.rnn.lstm_hidden = r.at("lstm_hidden").get<std::size_t>();
    c.rnn.learning_rate = r.at("learning_rate").get<double>();
    c.rnn.beta1 = r.at("beta1").get<double>();
    c.rnn.beta2 = r.at("beta2").get<double>();
    c.rnn.epsilon = r.at("epsilon").get<double>();
    c.rnn.batch_size = r.at("batch_size").get<std::size_t>();
    c.rnn.epochs = r.at("epochs").get<int>();
    c.rnn_double = r.at("precision").get<std::string>() == "double";
    c.rnn_threshold = r.at("threshold").get<double>();
    return c;
  }

 private:
  static std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
      return s.substr(1, s.size() - 2);
    return s;
  }
  static double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return d;
  }
  static std::uint64_t to_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
      throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    return out;
  }
  static bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// TOML-like key/value text: `key = value`, `[section]` headers prefix keys
// with "section.", `#` starts a comment line.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::string section;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = detail::trim(line.substr(eq + 1));
  }
  return kv;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

// File settings first, then overrides (flags win).
inline RunConfig make_run_config(const std::map<std::string, std::string>& file,
                                 const std::map<std::string, std::string>& overrides) {
  RunConfig c;
  for (const auto& [k, v] : file) c.set(k, v);
  for (const auto& [k, v] : overrides) c.set(k, v);
  return c;
}

// Kaggle file name looked up under MBTI_DATA_DIR when no path was given.
inline constexpr const char* kDefaultDataFile = "mbti_1.csv";

inline std::string resolve_data_path(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* dir = std::getenv("MBTI_DATA_DIR"); dir && *dir)
    return (std::filesystem::path(dir) / kDefaultDataFile).string();
  throw ConfigError("no dataset given: pass --data or set MBTI_DATA_DIR");
}

}  // namespace mbti
