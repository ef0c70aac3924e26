#include <fstream>
#include <sstream>

#include "capsim/protocol.hpp"

namespace capsim {

namespace {

std::string elem(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& require_key(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ProtocolValidationError(key, "missing required key");
  return j.at(key);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ProtocolValidationError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t require_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ProtocolValidationError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ProtocolValidationError(path, "expected an array");
  return j;
}

// A state is an array of `dim` amplitudes, each a [re, im] pair.
PureState parse_state(const json& j, std::size_t dim, const std::string& path) {
  require_array(j, path);
  if (j.size() != dim) {
    throw ProtocolValidationError(path, "expected " + std::to_string(dim) + " amplitudes");
  }
  std::vector<cdouble> amps;
  amps.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string ap = elem(path, i);
    const json& pair = require_array(j.at(i), ap);
    if (pair.size() != 2) throw ProtocolValidationError(ap, "expected a [re, im] pair");
    amps.emplace_back(require_number(pair.at(0), elem(ap, 0)),
                      require_number(pair.at(1), elem(ap, 1)));
  }
  try {
    return PureState(std::move(amps));
  } catch (const std::invalid_argument& e) {
    throw ProtocolValidationError(path, e.what());
  }
}

std::vector<std::vector<std::vector<double>>> parse_table(
    const json& j, const std::string& name, std::size_t n_shared,
    std::size_t n_rows, std::size_t n_cols, const char* row_desc,
    const char* col_desc) {
  require_array(j, name);
  if (j.size() != n_shared) {
    throw ProtocolValidationError(name, "expected one table per shared value");
  }
  std::vector<std::vector<std::vector<double>>> table(n_shared);
  for (std::size_t x = 0; x < n_shared; ++x) {
    const std::string xp = elem(name, x);
    const json& block = require_array(j.at(x), xp);
    if (block.size() != n_rows) {
      throw ProtocolValidationError(
          xp, "expected " + std::to_string(n_rows) + " rows (" + row_desc + ")");
    }
    table[x].resize(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const std::string rp = elem(xp, r);
      const json& row = require_array(block.at(r), rp);
      if (row.size() != n_cols) {
        throw ProtocolValidationError(
            rp, "expected " + std::to_string(n_cols) + " entries (" + col_desc + ")");
      }
      table[x][r].reserve(n_cols);
      for (std::size_t c = 0; c < n_cols; ++c) {
        table[x][r].push_back(require_number(row.at(c), elem(rp, c)));
      }
    }
  }
  return table;
}

json state_to_json(const PureState& s) {
  json out = json::array();
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    out.push_back(json::array({s[i].real(), s[i].imag()}));
  }
  return out;
}

}  // namespace

TabulatedProtocol TabulatedProtocol::from_json(const json& j) {
  if (!j.is_object()) throw ProtocolValidationError("$", "expected a JSON object");

  static const char* kKnown[] = {"dimension",     "states",  "measurements",
                                 "shared",        "message_count", "encoder",
                                 "decoder",       "support_weights"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKnown) {
      if (item.key() == k) known = true;
    }
    if (!known) throw ProtocolValidationError(item.key(), "unknown key");
  }

  TabulatedProtocol p;
  p.dimension = require_uint(require_key(j, "dimension"), "dimension");
  if (p.dimension < 2) throw ProtocolValidationError("dimension", "must be at least 2");

  const json& jstates = require_array(require_key(j, "states"), "states");
  if (jstates.empty()) throw ProtocolValidationError("states", "must be non-empty");
  for (std::size_t i = 0; i < jstates.size(); ++i) {
    p.states.push_back(parse_state(jstates.at(i), p.dimension, elem("states", i)));
  }

  const json& jmeas = require_array(require_key(j, "measurements"), "measurements");
  if (jmeas.empty()) throw ProtocolValidationError("measurements", "must be non-empty");
  for (std::size_t i = 0; i < jmeas.size(); ++i) {
    p.measurements.push_back(parse_state(jmeas.at(i), p.dimension, elem("measurements", i)));
  }

  const json& jshared = require_array(require_key(j, "shared"), "shared");
  if (jshared.empty()) throw ProtocolValidationError("shared", "must be non-empty");
  for (std::size_t i = 0; i < jshared.size(); ++i) {
    const std::string sp = elem("shared", i);
    const json& entry = jshared.at(i);
    if (!entry.is_object()) throw ProtocolValidationError(sp, "expected an object");
    if (!entry.contains("label")) {
      throw ProtocolValidationError(sp + ".label", "missing required key");
    }
    if (!entry.at("label").is_string()) {
      throw ProtocolValidationError(sp + ".label", "expected a string");
    }
    if (!entry.contains("weight")) {
      throw ProtocolValidationError(sp + ".weight", "missing required key");
    }
    SharedValue v;
    v.label = entry.at("label").get<std::string>();
    v.weight = require_number(entry.at("weight"), sp + ".weight");
    p.shared.push_back(std::move(v));
  }

  p.message_count = require_uint(require_key(j, "message_count"), "message_count");
  if (p.message_count < 1) throw ProtocolValidationError("message_count", "must be at least 1");

  p.encoder = parse_table(require_key(j, "encoder"), "encoder", p.shared.size(),
                          p.states.size(), p.message_count, "one per state",
                          "one per message");
  p.decoder = parse_table(require_key(j, "decoder"), "decoder", p.shared.size(),
                          p.message_count, p.measurements.size(),
                          "one per message", "one per measurement");

  if (j.contains("support_weights")) {
    const json& jw = require_array(j.at("support_weights"), "support_weights");
    if (jw.size() != p.states.size()) {
      throw ProtocolValidationError("support_weights", "must have one entry per state");
    }
    std::vector<double> w;
    w.reserve(jw.size());
    for (std::size_t i = 0; i < jw.size(); ++i) {
      w.push_back(require_number(jw.at(i), elem("support_weights", i)));
    }
    p.support_weights = std::move(w);
  }

  return p;
}

TabulatedProtocol TabulatedProtocol::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolValidationError(path, "cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ProtocolValidationError(path, std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

json TabulatedProtocol::to_json() const {
  json j;
  j["dimension"] = dimension;
  j["states"] = json::array();
  for (const auto& s : states) j["states"].push_back(state_to_json(s));
  j["measurements"] = json::array();
  for (const auto& m : measurements) j["measurements"].push_back(state_to_json(m));
  j["shared"] = json::array();
  for (const auto& v : shared) j["shared"].push_back({{"label", v.label}, {"weight", v.weight}});
  j["message_count"] = message_count;
  j["encoder"] = encoder;
  j["decoder"] = decoder;
  if (support_weights) j["support_weights"] = *support_weights;
  return j;
}

void TabulatedProtocol::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json().dump(2) << "\n";
}

}  // namespace capsim
