#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>

#include "mbti/container.hpp"
#include "oracles.hpp"
#include "test_paths.hpp"

using namespace mbti;

TEST(ConfigText, SectionsCommentsAndQuotes) {
  const auto kv = parse_config_text(
      "# top comment\n"
      "ratio = 0.8\n"
      "data = \"some file.csv\"\n"
      "\n"
      "[svm]\n"
      "c = 2.5\n"
      "  # indented comment\n"
      "[rnn]\n"
      "epochs=3\r\n");
  EXPECT_EQ(kv.at("ratio"), "0.8");
  EXPECT_EQ(kv.at("svm.c"), "2.5");
  EXPECT_EQ(kv.at("rnn.epochs"), "3");
  const auto cfg = make_run_config(kv, {});
  EXPECT_EQ(cfg.data, "some file.csv");
  EXPECT_DOUBLE_EQ(cfg.ratio, 0.8);
  EXPECT_DOUBLE_EQ(cfg.svm_c, 2.5);
  EXPECT_EQ(cfg.rnn.epochs, 3);
}

TEST(ConfigText, MalformedLinesRejected) {
  EXPECT_THROW(parse_config_text("[svm\nc=1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("just words\n"), ConfigError);
  EXPECT_THROW(parse_config_text(" = 3\n"), ConfigError);
}

TEST(RunConfigSet, UnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(c.set("colour", "red"), ConfigError);
  EXPECT_THROW(c.set("ratio", "abc"), ConfigError);
  EXPECT_THROW(c.set("seed", "-1"), ConfigError);
  EXPECT_THROW(c.set("stratify", "maybe"), ConfigError);
  EXPECT_THROW(c.set("model", "lstm"), ConfigError);
  EXPECT_THROW(c.set("rnn.precision", "half"), ConfigError);
  c.set("model", "rnn");
  EXPECT_EQ(c.model, ModelFamily::RNN);
  c.set("rnn.precision", "float");
  EXPECT_FALSE(c.rnn_double);
}

TEST(RunConfig, Defaults) {
  const RunConfig c;
  EXPECT_DOUBLE_EQ(c.ratio, 0.75);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.max_terms, 72000u);
  EXPECT_EQ(c.max_len, 200u);
  EXPECT_EQ(c.rnn.embed_dim, 256u);
  EXPECT_EQ(c.rnn.conv_filters, 64u);
  EXPECT_EQ(c.rnn.conv_kernel, 5u);
  EXPECT_EQ(c.rnn.lstm_hidden, 64u);
  EXPECT_DOUBLE_EQ(c.rnn.learning_rate, 1e-3);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, FlagsOverrideFile) {
  const auto c = make_run_config({{"seed", "1"}, {"ratio", "0.6"}}, {{"seed", "9"}});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_DOUBLE_EQ(c.ratio, 0.6);
}

TEST(RunConfig, ValidateRatioAndSizes) {
  for (const char* r : {"0", "1", "1.5", "-0.2"}) {
    RunConfig c;
    c.set("ratio", r);
    EXPECT_THROW(c.validate(), ConfigError) << r;
  }
  RunConfig c;
  c.set("rnn.lstm_hidden", "0");
  EXPECT_THROW(c.validate(), ConfigError);
  RunConfig d;
  d.set("svm.epochs", "0");
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.data = "x.csv";
  c.ratio = 0.7;
  c.seed = 123456789012345ull;
  c.stratify = true;
  c.model = ModelFamily::SVM;
  c.nb_tfidf = true;
  c.svm_c = 0.3;
  c.rnn.epochs = 2;
  c.rnn_double = false;
  const auto back = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.model, ModelFamily::SVM);
}

TEST(ResolveDataPath, ExplicitThenEnvironment) {
  EXPECT_EQ(resolve_data_path("given.csv"), "given.csv");
  ::setenv("MBTI_DATA_DIR", "/some/dir", 1);
  EXPECT_EQ(resolve_data_path(""), "/some/dir/mbti_1.csv");
  ::unsetenv("MBTI_DATA_DIR");
  EXPECT_THROW(resolve_data_path(""), ConfigError);
}

namespace {

struct Fixture {
  std::vector<TokenList> docs{{"fun", "fun", "party"}, {"quiet", "book"}, {"party", "loud"}, {"book", "tea"}};
  std::vector<std::uint8_t> y{0, 1, 0, 1};
  Vocabulary vocab = build_vocab(docs);
};

ModelContainer round_trip(const ModelContainer& c) {
  const auto bytes = encode_container(c);
  return decode_container(bytes);
}

}  // namespace

TEST(Container, NaiveBayesRoundTrip) {
  const Fixture f;
  const auto x = bow_matrix(f.docs, f.vocab);
  ModelContainer c{Dimension::TF, f.vocab.hash(), RunConfig{}, nb_fit(x, f.y, 1.0)};
  const auto back = round_trip(c);
  EXPECT_EQ(back.family(), ModelFamily::NB);
  EXPECT_EQ(back.dimension, Dimension::TF);
  EXPECT_EQ(back.vocab_hash, f.vocab.hash());
  EXPECT_EQ(back.config.to_json(), c.config.to_json());
  for (const auto& row : x.rows)
    EXPECT_EQ(nb_log_posterior(std::get<NBModel>(back.model), row), nb_log_posterior(std::get<NBModel>(c.model), row));
  EXPECT_NO_THROW(check_vocabulary(back, f.vocab));
}

TEST(Container, SvmRoundTrip) {
  const Fixture f;
  const auto x = tfidf_transform(bow_matrix(f.docs, f.vocab), f.vocab);
  RunConfig cfg;
  cfg.model = ModelFamily::SVM;
  ModelContainer c{Dimension::JP, f.vocab.hash(), cfg, svm_fit(x, f.y, {1.0, 5, 0, true, {}})};
  const auto back = round_trip(c);
  EXPECT_EQ(back.family(), ModelFamily::SVM);
  for (const auto& row : x.rows)
    EXPECT_EQ(svm_decision(std::get<SVMModel>(back.model), row), svm_decision(std::get<SVMModel>(c.model), row));
}

TEST(Container, RnnRoundTripBothPrecisions) {
  auto rc = oracle::tiny_rnn_config(12);
  RunConfig cfg;
  cfg.model = ModelFamily::RNN;
  cfg.max_len = rc.max_len;
  Rng rng(1);
  SequenceBatch b(4, rc.max_len);
  for (auto& v : b.data) v = static_cast<std::int32_t>(rng.below(rc.vocab_size + 1));
  auto check = [&](auto tag) {
    using T = decltype(tag);
    cfg.rnn_double = sizeof(T) == 8;
    const auto m = rnn_init<T>(rc);
    const auto back = round_trip(ModelContainer{Dimension::NS, 99, cfg, m});
    const auto& bm = std::get<RNNModel<T>>(back.model);
    EXPECT_EQ(bm.config, m.config);
    const auto p = rnn_probabilities(m, b), q = rnn_probabilities(bm, b);
    EXPECT_EQ(0, std::memcmp(p.data(), q.data(), p.size() * sizeof(T)));
  };
  check(double{});
  check(float{});
}

TEST(Container, FileRoundTrip) {
  const Fixture f;
  testing_paths::TempDir dir("container");
  ModelContainer c{Dimension::IE, f.vocab.hash(), RunConfig{}, nb_fit(bow_matrix(f.docs, f.vocab), f.y, 1.0)};
  const auto path = (dir / "IE.model").string();
  save_model(c, path);
  EXPECT_EQ(load_model(path).vocab_hash, c.vocab_hash);
  EXPECT_THROW(load_model((dir / "missing.model").string()), Error);
}

TEST(Container, CorruptFilesRejected) {
  const Fixture f;
  ModelContainer c{Dimension::IE, f.vocab.hash(), RunConfig{}, nb_fit(bow_matrix(f.docs, f.vocab), f.y, 1.0)};
  const auto bytes = encode_container(c);

  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_container(truncated), Error);
  EXPECT_THROW(decode_container(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 4)), Error);
  EXPECT_THROW(decode_container(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 20)), Error);
  auto padded = bytes;
  padded.push_back(0);
  EXPECT_THROW(decode_container(padded), Error);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  try {
    decode_container(bad_magic);
    ADD_FAILURE() << "bad magic accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
  }

  auto bumped = bytes;
  bumped[8] = 2;  // version field follows the 8-byte magic
  try {
    decode_container(bumped);
    ADD_FAILURE() << "future version accepted";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("version 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("version 1"), std::string::npos) << msg;
  }
}

TEST(Container, VocabularyHashMismatchNamesBothHashes) {
  const Fixture f;
  ModelContainer c{Dimension::IE, f.vocab.hash(), RunConfig{}, nb_fit(bow_matrix(f.docs, f.vocab), f.y, 1.0)};
  const auto other = build_vocab({{"different"}});
  try {
    check_vocabulary(c, other);
    ADD_FAILURE() << "mismatch accepted";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(hash_hex(f.vocab.hash())), std::string::npos) << msg;
    EXPECT_NE(msg.find(hash_hex(other.hash())), std::string::npos) << msg;
  }
}
