#include "sod/phrase/phrase.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sod::phrase {

using nlohmann::json;

namespace {

bool is_separator(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '.';
}

void validate_token_text(const std::string& s, const char* what) {
  if (s.empty()) throw ValueError(std::string(what) + " is empty");
  for (char c : s) {
    if (c == '.')
      throw ValueError(std::string(what) + " '" + s + "' contains a separator");
    if (std::isupper(static_cast<unsigned char>(c)))
      throw ValueError(std::string(what) + " '" + s + "' is not lowercase");
  }
}

}  // namespace

void Phrase::validate() const {
  validate_token_text(noun, "noun");
  if (noun.find(' ') != std::string::npos)
    throw ValueError("noun '" + noun + "' must be a single token");
  if (adjective) {
    validate_token_text(*adjective, "adjective");
    std::istringstream ss(*adjective);
    std::string tok;
    while (ss >> tok) validate_token_text(tok, "adjective token");
  }
}

Phrase parse_phrase(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text)
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  std::vector<std::string> tokens;
  std::string tok;
  for (char c : lowered) {
    if (is_separator(c)) {
      if (!tok.empty()) tokens.push_back(std::move(tok));
      tok.clear();
    } else {
      tok.push_back(c);
    }
  }
  if (!tok.empty()) tokens.push_back(std::move(tok));
  if (tokens.empty())
    throw ValueError("cannot parse phrase from '" + text + "': no tokens");

  Phrase p;
  p.noun = tokens.back();
  if (tokens.size() > 1) {
    std::string adj = tokens[0];
    for (size_t i = 1; i + 1 < tokens.size(); ++i) adj += " " + tokens[i];
    p.adjective = std::move(adj);
  }
  p.validate();
  return p;
}

std::string format_phrase(const Phrase& p) {
  p.validate();
  return p.adjective ? *p.adjective + " " + p.noun : p.noun;
}

std::string to_string(PhraseOrigin o) {
  return o == PhraseOrigin::Manual ? "manual" : "generated";
}

PhraseOrigin phrase_origin_from_string(const std::string& s) {
  if (s == "manual") return PhraseOrigin::Manual;
  if (s == "generated") return PhraseOrigin::Generated;
  throw ValueError("unknown phrase origin '" + s + "'");
}

void PhraseSet::validate() const {
  if (image_id.empty()) throw ValueError("PhraseSet: empty image_id");
  if (phrases.empty())
    throw ValueError("PhraseSet for '" + image_id + "': needs at least one phrase");
  for (size_t i = 0; i < phrases.size(); ++i) {
    phrases[i].validate();
    for (size_t j = i + 1; j < phrases.size(); ++j)
      if (phrases[i] == phrases[j])
        throw ValueError("PhraseSet for '" + image_id + "': duplicate phrase '" +
                         format_phrase(phrases[i]) + "'");
  }
}

std::string build_prompt(const PhraseSet& ps, bool with_adjectives) {
  ps.validate();
  std::string prompt;
  for (size_t i = 0; i < ps.phrases.size(); ++i) {
    if (i) prompt += " . ";
    prompt += with_adjectives ? format_phrase(ps.phrases[i]) : ps.phrases[i].noun;
  }
  prompt += " .";
  return prompt;
}

std::vector<std::string> split_prompt(const std::string& prompt) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream ss(prompt);
  std::string tok;
  while (ss >> tok) {
    if (tok == ".") {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      if (!current.empty()) current += " ";
      current += tok;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

std::vector<PhraseSet> read_phrase_sets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phrase file '" + path + "'");
  std::vector<PhraseSet> sets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("phrase file line " + std::to_string(line_no) + ": " + e.what());
    }
    PhraseSet ps;
    ps.image_id = j.at("image_id").get<std::string>();
    ps.origin = phrase_origin_from_string(j.at("origin").get<std::string>());
    for (const auto& pj : j.at("phrases")) {
      Phrase p;
      if (pj.contains("adjective") && !pj.at("adjective").is_null())
        p.adjective = pj.at("adjective").get<std::string>();
      p.noun = pj.at("noun").get<std::string>();
      ps.phrases.push_back(std::move(p));
    }
    ps.validate();
    sets.push_back(std::move(ps));
  }
  return sets;
}

void write_phrase_sets(const std::vector<PhraseSet>& sets, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const PhraseSet& ps : sets) {
    ps.validate();
    json phrases = json::array();
    for (const Phrase& p : ps.phrases)
      phrases.push_back({{"adjective", p.adjective ? json(*p.adjective) : json()},
                         {"noun", p.noun}});
    json j = {{"image_id", ps.image_id},
              {"origin", to_string(ps.origin)},
              {"phrases", phrases}};
    out << j.dump() << '\n';
  }
}

}  // namespace sod::phrase
