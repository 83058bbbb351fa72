#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "conditioning.hpp"
#include "constants.hpp"
#include "corridor.hpp"
#include "dehn.hpp"
#include "strata.hpp"

namespace corridorlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// TOML subset: comments, [table] headers, key = value with basic or literal
// strings, integers, booleans, arrays and inline tables of those.

namespace detail {

class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : s_(text) {}

  Json parse() {
    Json root = Json::object();
    Json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++i_;
        skip_ws();
        std::string name = key();
        skip_ws();
        expect(']');
        end_of_line();
        if (root.contains(name)) fail("table [" + name + "] defined twice");
        root[name] = Json::object();
        table = &root[name];
        continue;
      }
      std::string k = key();
      skip_ws();
      expect('=');
      skip_ws();
      if (table->contains(k)) fail("duplicate key " + k);
      (*table)[k] = value();
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }

  [[noreturn]] void fail(const std::string& why) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) line += s_[k] == '\n';
    throw InputError("TOML line " + std::to_string(line) + ": " + why);
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++i_;
  }

  void skip_comment() {
    if (!eof() && peek() == '#')
      while (!eof() && peek() != '\n') ++i_;
  }

  void skip_blank_lines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (!eof() && (peek() == '\n' || peek() == '\r')) {
        ++i_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++i_;
    if (eof() || peek() != '\n') fail("trailing characters");
    ++i_;
  }

  // inside arrays and inline tables newlines and comments are whitespace
  void skip_space_nl() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
        ++i_;
      else if (c == '#')
        skip_comment();
      else
        break;
    }
  }

  std::string key() {
    if (eof()) fail("expected a key");
    if (peek() == '"' || peek() == '\'') return string();
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) k += s_[i_++];
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string string() {
    const char q = peek();
    ++i_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == q) return out;
      if (q == '"' && c == '\\') {
        if (eof()) fail("unterminated escape");
        char e = s_[i_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
  }

  Json value() {
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"' || c == '\'') return string();
    if (c == '[') {
      ++i_;
      Json arr = Json::array();
      skip_space_nl();
      while (!eof() && peek() != ']') {
        arr.push_back(value());
        skip_space_nl();
        if (!eof() && peek() == ',') {
          ++i_;
          skip_space_nl();
        } else {
          break;
        }
      }
      expect(']');
      return arr;
    }
    if (c == '{') {
      ++i_;
      Json obj = Json::object();
      skip_ws();
      while (!eof() && peek() != '}') {
        std::string k = key();
        skip_ws();
        expect('=');
        skip_ws();
        if (obj.contains(k)) fail("duplicate key " + k);
        obj[k] = value();
        skip_ws();
        if (!eof() && peek() == ',') {
          ++i_;
          skip_ws();
        } else {
          break;
        }
      }
      expect('}');
      return obj;
    }
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-' || peek() == '+' || peek() == '_'))
      tok += s_[i_++];
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char d : tok)
      if (d != '_') digits += d;
    if (!digits.empty()) {
      std::size_t used = 0;
      try {
        long long v = std::stoll(digits, &used);
        if (used == digits.size()) return v;
      } catch (const std::exception&) {
      }
    }
    fail("unsupported value '" + tok + "'");
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Json parse_toml(std::string_view text) { return detail::TomlReader(text).parse(); }

// ---------------------------------------------------------------------------
// Automorphism files

inline PositiveAutomorphism automorphism_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("automorphism file must be an object");
  if (!j.contains("letters") || !j["letters"].is_array()) throw InputError("missing array 'letters'");
  std::vector<std::string> names;
  for (const auto& n : j["letters"]) {
    if (!n.is_string()) throw InputError("letters must be strings");
    names.push_back(n.get<std::string>());
  }
  Alphabet alphabet(names);
  auto read_map = [&](const char* field) {
    const Json& obj = j[field];
    if (!obj.is_object()) throw InputError(std::string("'") + field + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (alphabet.index_of(it.key()) < 0) throw InputError(std::string(field) + ": unknown letter " + it.key());
    std::vector<Word> out;
    for (const auto& n : names) {
      if (!obj.contains(n)) throw InputError(std::string(field) + ": no entry for " + n);
      if (!obj[n].is_string()) throw InputError(std::string(field) + ": entry for " + n + " must be a string");
      out.push_back(parse_word(obj[n].get<std::string>(), alphabet));
    }
    return out;
  };
  if (!j.contains("images")) throw InputError("missing object 'images'");
  auto images = read_map("images");
  std::optional<std::vector<Word>> inverse;
  if (j.contains("inverse_images")) inverse = read_map("inverse_images");
  return PositiveAutomorphism::create(alphabet, std::move(images), std::move(inverse));
}

inline Json automorphism_to_json(const PositiveAutomorphism& phi) {
  Json j;
  j["letters"] = phi.alphabet().names();
  Json im = Json::object();
  for (std::size_t i = 0; i < phi.rank(); ++i)
    im[phi.alphabet().name(static_cast<int>(i))] = format_word(phi.image(static_cast<int>(i)), phi.alphabet());
  j["images"] = im;
  if (phi.has_inverse()) {
    Json inv = Json::object();
    for (std::size_t i = 0; i < phi.rank(); ++i)
      inv[phi.alphabet().name(static_cast<int>(i))] =
          format_word(phi.inverse_images()[i], phi.alphabet());
    j["inverse_images"] = inv;
  }
  return j;
}

inline std::string automorphism_to_toml(const PositiveAutomorphism& phi) {
  std::ostringstream os;
  const auto& names = phi.alphabet().names();
  os << "letters = [";
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << '"' << names[i] << '"';
  os << "]\n\n[images]\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    os << names[i] << " = \"" << format_word(phi.image(static_cast<int>(i)), phi.alphabet()) << "\"\n";
  if (phi.has_inverse()) {
    os << "\n[inverse_images]\n";
    for (std::size_t i = 0; i < names.size(); ++i)
      os << names[i] << " = \"" << format_word(phi.inverse_images()[i], phi.alphabet()) << "\"\n";
  }
  return os.str();
}

inline bool looks_like_toml_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0;
}

/// JSON if the text starts with '{', TOML otherwise.
inline PositiveAutomorphism parse_automorphism(std::string_view text) {
  std::size_t k = 0;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
  if (k < text.size() && text[k] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("JSON: ") + e.what());
    }
    return automorphism_from_json(j);
  }
  return automorphism_from_json(parse_toml(text));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline PositiveAutomorphism load_automorphism(const std::string& path) { return parse_automorphism(read_file(path)); }

/// Writes TOML for *.toml paths, JSON otherwise.
inline void save_automorphism(const PositiveAutomorphism& phi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  if (looks_like_toml_path(path))
    out << automorphism_to_toml(phi);
  else
    out << automorphism_to_json(phi).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Reports

inline Json letter_names(const Alphabet& al, const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(al.name(x));
  return a;
}

inline Json strata_to_json(const PositiveAutomorphism& phi) {
  const auto report = supports_and_strata(phi);
  const auto growth = classify_growth(phi, report);
  const auto& al = phi.alphabet();
  Json j;
  j["automorphism"] = automorphism_to_json(phi);
  Json strata = Json::array();
  for (const auto& s : report.strata) {
    Json e;
    e["letters"] = letter_names(al, s.letters);
    e["kind"] = to_string(s.kind);
    strata.push_back(e);
  }
  j["strata"] = strata;
  Json letters = Json::array();
  std::optional<std::vector<LetterClass>> classes;
  try {
    classes = classify_fastness(phi, report);
  } catch (const NotConditionedError&) {
  }
  for (std::size_t x = 0; x < phi.rank(); ++x) {
    const int xi = static_cast<int>(x);
    Json e;
    e["letter"] = al.name(xi);
    e["support"] = letter_names(al, report.support[x]);
    e["stratum"] = report.stratum_of[x];
    e["pre"] = letter_names(al, report.pre[x]);
    e["growth"] = to_string(growth[x].kind);
    if (growth[x].kind == GrowthKind::Polynomial) e["degree"] = growth[x].degree;
    if (classes) {
      const auto& c = (*classes)[x];
      e["preferred"] = c.preferred ? Json(*c.preferred) : Json(nullptr);
      e["left_fast"] = c.left_fast;
      e["right_fast"] = c.right_fast;
      e["left_para_linear"] = c.left_para_linear;
      e["right_para_linear"] = c.right_para_linear;
    }
    letters.push_back(e);
  }
  j["letters"] = letters;
  j["conditioned"] = classes.has_value();
  return j;
}

inline std::string strata_table(const PositiveAutomorphism& phi) {
  const auto report = supports_and_strata(phi);
  const auto growth = classify_growth(phi, report);
  const auto& al = phi.alphabet();
  auto set = [&](const std::vector<int>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + al.name(xs[i]);
    return s + "}";
  };
  std::ostringstream os;
  os << std::left << std::setw(8) << "letter" << std::setw(14) << "image" << std::setw(20) << "support"
     << std::setw(9) << "stratum" << "growth\n";
  for (std::size_t x = 0; x < phi.rank(); ++x) {
    const int xi = static_cast<int>(x);
    std::string g = to_string(growth[x].kind);
    if (growth[x].kind == GrowthKind::Polynomial) g += " " + std::to_string(growth[x].degree);
    os << std::setw(8) << al.name(xi) << std::setw(14) << format_word(phi.image(xi), al) << std::setw(20)
       << set(report.support[x]) << std::setw(9) << report.stratum_of[x] << g << "\n";
  }
  for (std::size_t s = 0; s < report.strata.size(); ++s)
    os << "stratum " << s << ": " << set(report.strata[s].letters) << " " << to_string(report.strata[s].kind) << "\n";
  return os.str();
}

inline Json certificate_to_json(const Conditioned& c) {
  const auto& cert = c.certificate;
  const auto& al = c.phi0.alphabet();
  Json j;
  j["k"] = cert.k;
  Json props = Json::array();
  for (std::size_t p = 0; p < 5; ++p) {
    Json e;
    e["property"] = p + 1;
    e["holds"] = cert.holds[p];
    if (!cert.holds[p]) e["failure"] = cert.failure[p];
    props.push_back(e);
  }
  j["properties"] = props;
  j["self_occurrences"] = cert.self_occurrences;
  j["min_support_occurrences"] = cert.min_support_occurrences;
  Json firsts = Json::array(), lasts = Json::array();
  for (int x : cert.first_letter) firsts.push_back(al.name(x));
  for (int x : cert.last_letter) lasts.push_back(al.name(x));
  j["first_letters"] = firsts;
  j["last_letters"] = lasts;
  Json strata = Json::array();
  for (const auto& w : cert.strata_witnesses) {
    Json e;
    e["letter"] = al.name(w.letter);
    e["stratum"] = w.stratum;
    e["leftmost"] = w.leftmost ? Json(al.name(*w.leftmost)) : Json(nullptr);
    e["rightmost"] = w.rightmost ? Json(al.name(*w.rightmost)) : Json(nullptr);
    e["left_orbit"] = letter_names(al, w.left_orbit);
    e["right_orbit"] = letter_names(al, w.right_orbit);
    e["stable"] = w.stable;
    strata.push_back(e);
  }
  j["strata_witnesses"] = strata;
  j["brute_force_depth"] = cert.brute_force_depth;
  j["phi0"] = automorphism_to_json(c.phi0);
  return j;
}

inline Json huge_to_json(const HugeInt& v) {
  Json j;
  j["exact"] = v.is_exact();
  j["value"] = v.to_string();
  j["approx"] = v.brief();
  return j;
}

inline Json ledger_to_json(const ConstantsLedger& L) {
  Json j;
  j["m"] = L.m;
  Json entries = Json::array();
  for (const auto& e : L.entries) {
    Json r;
    r["name"] = e.name;
    r["value"] = huge_to_json(e.value);
    r["formula"] = e.formula;
    r["citation"] = e.citation;
    entries.push_back(r);
  }
  j["entries"] = entries;
  return j;
}

inline Json corridor_record(const CorridorStack& s, std::size_t t, const Alphabet& al) {
  const auto& c = s.corridors[t];
  Json j;
  j["time"] = t;
  j["bottom"] = format_word(c.bottom, al);
  j["top"] = format_word(c.top, al);
  j["naive_top"] = format_letters(c.naive_top, al);
  j["area"] = c.area();
  j["colours"] = s.colour[t];
  Json ev = Json::array();
  for (const auto& e : s.events) {
    if (e.time != t && !(e.kind == EventKind::NeuteringComplete && e.time == t + 1)) continue;
    Json r;
    r["kind"] = to_string(e.kind);
    r["time"] = e.time;
    r["positions"] = e.positions;
    r["colours"] = e.colours;
    ev.push_back(r);
  }
  j["events"] = ev;
  return j;
}

inline Json relator_step_to_json(const RelatorStep& s, const Alphabet& pal) {
  Json j;
  j["before"] = format_word(s.before, pal);
  j["position"] = s.position;
  j["generator"] = pal.name(s.generator);
  j["inverse"] = s.inverse;
  j["rotation"] = s.rotation;
  j["length"] = s.length;
  return j;
}

inline Json area_to_json(const PositiveAutomorphism& phi, const AreaCertificate& c) {
  const Alphabet pal = presentation_alphabet(phi);
  Json j;
  j["word"] = format_word(c.word, pal);
  j["status"] = to_string(c.status);
  if (c.status == AreaStatus::Found) j["area"] = c.area;
  j["states"] = c.states;
  Json w = Json::array();
  for (const auto& s : c.witness) w.push_back(relator_step_to_json(s, pal));
  j["witness"] = w;
  return j;
}

}  // namespace corridorlab
