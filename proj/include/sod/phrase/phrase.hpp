#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sod/core/error.hpp"

namespace sod::phrase {

// "(adjective) + noun" text unit naming one salient object. The adjective is
// optional and may span several tokens; the noun is a single token. Tokens
// are lowercase and contain no separator characters (whitespace or '.').
struct Phrase {
  std::optional<std::string> adjective;
  std::string noun;

  bool operator==(const Phrase&) const = default;
  void validate() const;
};

// Lowercases, splits on whitespace; the final token is the noun, anything
// before it becomes the adjective.
Phrase parse_phrase(const std::string& text);
std::string format_phrase(const Phrase& p);

enum class PhraseOrigin { Manual, Generated };

std::string to_string(PhraseOrigin o);
PhraseOrigin phrase_origin_from_string(const std::string& s);

struct PhraseSet {
  std::string image_id;
  std::vector<Phrase> phrases;  // nonempty, no exact duplicates
  PhraseOrigin origin = PhraseOrigin::Manual;

  void validate() const;
};

// Phrases rendered "adj noun" / "noun", joined with " . " and terminated
// with " ."; input order is preserved. with_adjectives=false renders every
// phrase noun-only (the text ablation arm).
std::string build_prompt(const PhraseSet& ps, bool with_adjectives = true);

// Prompt-side split, used by grounder backends: the inverse of build_prompt
// up to phrase normalization.
std::vector<std::string> split_prompt(const std::string& prompt);

// JSON Lines {image_id, origin, phrases: [{adjective: string|null, noun}]}.
std::vector<PhraseSet> read_phrase_sets(const std::string& path);
void write_phrase_sets(const std::vector<PhraseSet>& sets, const std::string& path);

}  // namespace sod::phrase
