#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "sevencubes/cubes.hpp"
#include "sevencubes/errors.hpp"
#include "sevencubes/integer.hpp"

// Certificate JSON. Every integer is a decimal string.
//
//   {
//     "N": "...",
//     "path": "constructive" | "fallback",
//     "mode": "seven_positive" | "at_most_seven",
//     "cubes": ["...", x7],
//     "witness": {                      // constructive only
//       "beta": 1 | 5, "p": "...", "x0": "...", "Q1": "...", "X": ["...", x3]
//     }
//   }

namespace sevencubes::io {

using nlohmann::json;

inline const char* to_string(Path path) { return path == Path::constructive ? "constructive" : "fallback"; }

inline const char* to_string(FallbackMode mode) {
  return mode == FallbackMode::seven_positive ? "seven_positive" : "at_most_seven";
}

inline json to_json(const Certificate& cert) {
  json j;
  j["N"] = cert.n.get_str();
  j["path"] = to_string(cert.path());
  j["mode"] = to_string(cert.mode);
  j["cubes"] = json::array();
  for (const auto& c : cert.cubes) j["cubes"].push_back(c.get_str());
  if (cert.witness) {
    const Witness& w = *cert.witness;
    j["witness"] = {{"beta", w.beta},
                    {"p", w.p.get_str()},
                    {"x0", w.x0.get_str()},
                    {"Q1", w.q1.get_str()},
                    {"X", {w.x[0].get_str(), w.x[1].get_str(), w.x[2].get_str()}}};
  }
  return j;
}

namespace detail {

inline Integer integer_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw ParseError(std::string("certificate: missing string field '") + key + "'");
  const auto text = j.at(key).get<std::string>();
  if (!text.empty() && text[0] == '-') return -parse_integer(std::string_view(text).substr(1));
  return parse_integer(text);
}

inline Integer integer_item(const json& item) {
  if (!item.is_string()) throw ParseError("certificate: array entries must be decimal strings");
  const auto text = item.get<std::string>();
  if (!text.empty() && text[0] == '-') return -parse_integer(std::string_view(text).substr(1));
  return parse_integer(text);
}

}  // namespace detail

inline Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("certificate: expected a JSON object");
  Certificate cert;
  cert.n = detail::integer_field(j, "N");
  const auto mode = j.value("mode", std::string("seven_positive"));
  if (mode == "seven_positive") {
    cert.mode = FallbackMode::seven_positive;
  } else if (mode == "at_most_seven") {
    cert.mode = FallbackMode::at_most_seven;
  } else {
    throw ParseError("certificate: unknown mode '" + mode + "'");
  }
  if (!j.contains("cubes") || !j.at("cubes").is_array() || j.at("cubes").size() != 7) {
    throw ParseError("certificate: 'cubes' must be an array of seven decimal strings");
  }
  for (std::size_t i = 0; i < 7; ++i) cert.cubes[i] = detail::integer_item(j.at("cubes")[i]);
  if (j.contains("witness") && !j.at("witness").is_null()) {
    const json& w = j.at("witness");
    if (!w.is_object() || !w.contains("beta") || !w.at("beta").is_number_unsigned()) {
      throw ParseError("certificate: witness needs an unsigned 'beta'");
    }
    Witness witness;
    witness.beta = w.at("beta").get<unsigned>();
    witness.p = detail::integer_field(w, "p");
    witness.x0 = detail::integer_field(w, "x0");
    witness.q1 = detail::integer_field(w, "Q1");
    if (!w.contains("X") || !w.at("X").is_array() || w.at("X").size() != 3) {
      throw ParseError("certificate: witness 'X' must hold three decimal strings");
    }
    for (std::size_t i = 0; i < 3; ++i) witness.x[i] = detail::integer_item(w.at("X")[i]);
    cert.witness = witness;
  }
  const auto path = j.value("path", std::string(to_string(cert.path())));
  if (path != to_string(cert.path())) throw ParseError("certificate: 'path' disagrees with the witness field");
  return cert;
}

inline Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate: invalid JSON: ") + e.what());
  }
  // Accept either a bare certificate or a CLI output record wrapping one.
  if (j.is_object() && j.contains("certificate")) return certificate_from_json(j.at("certificate"));
  return certificate_from_json(j);
}

inline void write_text(std::ostream& out, const Certificate& cert) {
  out << "N = " << cert.n.get_str() << '\n';
  out << "path = " << to_string(cert.path()) << '\n';
  out << "mode = " << to_string(cert.mode) << '\n';
  if (cert.witness) {
    const Witness& w = *cert.witness;
    out << "beta = " << w.beta << '\n';
    out << "p = " << w.p.get_str() << '\n';
    out << "x0 = " << w.x0.get_str() << '\n';
    out << "Q1 = " << w.q1.get_str() << '\n';
    out << "X = " << w.x[0].get_str() << ' ' << w.x[1].get_str() << ' ' << w.x[2].get_str() << '\n';
  }
  out << "cubes =";
  for (const auto& c : cert.cubes) out << ' ' << c.get_str();
  out << '\n';
}

}  // namespace sevencubes::io
