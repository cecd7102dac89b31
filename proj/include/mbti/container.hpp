#pragma once

// Self-describing model file:
//
//   8 bytes   magic "MBTIMODL"
//   u32       format version
//   u32       metadata length, then that many bytes of UTF-8 JSON
//   u64       payload length, then the payload
//
// All integers and payload numbers are little-endian fixed width. The JSON
// block names the model kind, the MBTI axis, the vocabulary hash and echoes
// the training configuration.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "binary_io.hpp"
#include "config.hpp"
#include "corpus.hpp"
#include "error.hpp"
#include "features.hpp"
#include "naive_bayes.hpp"
#include "rnn.hpp"
#include "svm.hpp"

namespace mbti {

inline constexpr char kContainerMagic[8] = {'M', 'B', 'T', 'I', 'M', 'O', 'D', 'L'};
inline constexpr std::uint32_t kContainerVersion = 1;

using ModelPayload = std::variant<NBModel, SVMModel, RNNModel<double>, RNNModel<float>>;

struct ModelContainer {
  Dimension dimension = Dimension::IE;
  std::uint64_t vocab_hash = 0;
  RunConfig config;
  ModelPayload model;

  ModelFamily family() const {
    if (std::holds_alternative<NBModel>(model)) return ModelFamily::NB;
    if (std::holds_alternative<SVMModel>(model)) return ModelFamily::SVM;
    return ModelFamily::RNN;
  }
};

inline std::string hash_hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::vector<std::uint8_t> encode_container(const ModelContainer& c) {
  nlohmann::json meta = {
      {"kind", family_name(c.family())},
      {"dimension", std::string(dimension_name(c.dimension))},
      {"vocab_hash", hash_hex(c.vocab_hash)},
      {"config", c.config.to_json()},
  };
  BinaryWriter payload;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, RNNModel<double>> || std::is_same_v<M, RNNModel<float>>) {
          meta["scalar"] = sizeof(typename decltype(m.params.dense)::Scalar) == 8 ? "f64" : "f32";
          meta["rnn_shape"] = {{"vocab_size", m.config.vocab_size},   {"embed_dim", m.config.embed_dim},
                               {"conv_filters", m.config.conv_filters}, {"conv_kernel", m.config.conv_kernel},
                               {"lstm_hidden", m.config.lstm_hidden}, {"max_len", m.config.max_len},
                               {"seed", m.config.seed}};
        }
        m.write(payload);
      },
      c.model);

  const std::string meta_text = meta.dump();
  BinaryWriter out;
  for (char ch : kContainerMagic) out.put<std::uint8_t>(static_cast<std::uint8_t>(ch));
  out.put<std::uint32_t>(kContainerVersion);
  out.put<std::uint32_t>(static_cast<std::uint32_t>(meta_text.size()));
  for (char ch : meta_text) out.put<std::uint8_t>(static_cast<std::uint8_t>(ch));
  out.put<std::uint64_t>(payload.bytes().size());
  std::vector<std::uint8_t> bytes = std::move(out).take();
  bytes.insert(bytes.end(), payload.bytes().begin(), payload.bytes().end());
  return bytes;
}

inline ModelContainer decode_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kContainerMagic) throw Error("model file truncated: missing header");
  for (std::size_t i = 0; i < sizeof kContainerMagic; ++i)
    if (bytes[i] != static_cast<std::uint8_t>(kContainerMagic[i])) throw Error("not a model file: bad magic");
  BinaryReader r(bytes.subspan(sizeof kContainerMagic));
  const auto version = r.get<std::uint32_t>();
  if (version != kContainerVersion)
    throw Error("unsupported model container version " + std::to_string(version) + " (this build reads version " +
                std::to_string(kContainerVersion) + ")");
  const auto meta_len = r.get<std::uint32_t>();
  std::string meta_text;
  meta_text.reserve(meta_len);
  for (std::uint32_t i = 0; i < meta_len; ++i) meta_text.push_back(static_cast<char>(r.get<std::uint8_t>()));

  nlohmann::json meta;
  ModelContainer c;
  try {
    meta = nlohmann::json::parse(meta_text);
    c.dimension = parse_dimension(meta.at("dimension").get<std::string>());
    c.vocab_hash = std::stoull(meta.at("vocab_hash").get<std::string>(), nullptr, 16);
    c.config = RunConfig::from_json(meta.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model metadata unreadable: ") + e.what());
  }

  const auto payload_len = r.get<std::uint64_t>();
  const std::size_t header = sizeof kContainerMagic + 4 + 4 + meta_len + 8;
  if (bytes.size() < header || bytes.size() - header != payload_len)
    throw Error("model file truncated or padded: payload should be " + std::to_string(payload_len) + " bytes, found " +
                std::to_string(bytes.size() < header ? 0 : bytes.size() - header));
  BinaryReader p(bytes.subspan(header));

  const std::string kind = meta.at("kind").get<std::string>();
  if (kind == "nb") {
    c.model = NBModel::read(p);
  } else if (kind == "svm") {
    c.model = SVMModel::read(p);
  } else if (kind == "rnn") {
    const auto& s = meta.at("rnn_shape");
    RNNConfig rc = c.config.rnn;
    rc.vocab_size = s.at("vocab_size").get<std::size_t>();
    rc.embed_dim = s.at("embed_dim").get<std::size_t>();
    rc.conv_filters = s.at("conv_filters").get<std::size_t>();
    rc.conv_kernel = s.at("conv_kernel").get<std::size_t>();
    rc.lstm_hidden = s.at("lstm_hidden").get<std::size_t>();
    rc.max_len = s.at("max_len").get<std::size_t>();
    rc.seed = s.at("seed").get<std::uint64_t>();
    if (meta.at("scalar").get<std::string>() == "f64")
      c.model = RNNModel<double>::read(p, rc);
    else
      c.model = RNNModel<float>::read(p, rc);
  } else {
    throw Error("unknown model kind '" + kind + "'");
  }
  if (!p.done()) throw Error("model payload has trailing bytes");
  return c;
}

inline void save_model(const ModelContainer& c, const std::string& path) {
  const auto bytes = encode_container(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model file '" + path + "'");
}

inline ModelContainer load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_container(bytes);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

inline void check_vocabulary(const ModelContainer& c, const Vocabulary& vocab) {
  const auto h = vocab.hash();
  if (h != c.vocab_hash)
    throw Error("vocabulary hash mismatch: model " + std::string(dimension_name(c.dimension)) + " expects " +
                hash_hex(c.vocab_hash) + ", supplied vocabulary is " + hash_hex(h));
}

}  // namespace mbti
