#include "tmkbench/extract.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "tmkbench/text.hpp"

namespace tmkbench::extract {

using core::Action;
using core::BlockId;
using core::Op;

namespace {

// Open/close tag spellings accepted when locating the answer block.
const char* kOpenTags[] = {"[plan]"};
const char* kCloseTags[] = {"[plan end]", "[plan_end]", "[plan-end]", "[planend]"};

std::size_t rfind_ci(const std::string& haystack_lower, std::string_view needle) {
  return haystack_lower.rfind(needle);
}

std::size_t find_ci(const std::string& haystack_lower, std::string_view needle, std::size_t from) {
  return haystack_lower.find(needle, from);
}

}  // namespace

std::pair<std::size_t, std::size_t> extract_block(std::string_view response_text) {
  std::string low = text::lower(response_text);
  std::size_t open_pos = std::string::npos;
  std::size_t open_len = 0;
  for (const char* tag : kOpenTags) {
    std::size_t pos = rfind_ci(low, tag);
    if (pos != std::string::npos && (open_pos == std::string::npos || pos > open_pos)) {
      open_pos = pos;
      open_len = std::string_view(tag).size();
    }
  }
  if (open_pos == std::string::npos) return {0, response_text.size()};

  std::size_t begin = open_pos + open_len;
  std::size_t end = response_text.size();
  for (const char* tag : kCloseTags) {
    std::size_t pos = find_ci(low, tag, begin);
    if (pos != std::string::npos) end = std::min(end, pos);
  }
  return {begin, end};
}

namespace {

struct Keyword {
  std::vector<std::string> tokens;
  Op op;
};

// The variant's own action words, matched first.
std::vector<Keyword> surface_keywords(const vocab::Vocabulary& v) {
  std::vector<Keyword> out;
  for (auto op : {Op::PickUp, Op::PutDown, Op::Stack, Op::Unstack}) {
    out.push_back({text::tokenize(text::lower(v.action_name.at(op))), op});
  }
  return out;
}

// Canonical-English glosses tolerated as stray tokens in any variant.
std::vector<Keyword> gloss_keywords() {
  return {
      {{"pick", "up"}, Op::PickUp}, {{"pickup"}, Op::PickUp},
      {{"put", "down"}, Op::PutDown}, {{"putdown"}, Op::PutDown},
      {{"stack"}, Op::Stack},
      {{"unstack"}, Op::Unstack},
  };
}

bool keyword_at(const std::vector<std::string>& tokens, std::size_t i, const Keyword& kw) {
  if (i + kw.tokens.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < kw.tokens.size(); ++k) {
    if (tokens[i + k] != kw.tokens[k]) return false;
  }
  return true;
}

// Marks the token span [i, i+len) as consumed.
void consume(std::vector<bool>& used, std::size_t i, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) used[i + k] = true;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Cleanup table: the specific decorations stripped before token matching.
// Deliberately a whitelist, not fuzzy matching.
std::vector<std::string> clean_tokens(std::string_view line) {
  std::string cleaned;
  cleaned.reserve(line.size());
  for (char c : line) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '-' || c == '_' || c == '*' || c == '.' || c == ',' || c == ':' || c == ';' ||
        c == '(' || c == ')' || c == '[' || c == ']' || c == '"' || c == '\'' || c == '`' ||
        c == '!' || c == '?') {
      cleaned.push_back(' ');
    } else {
      cleaned.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  auto tokens = text::tokenize(cleaned);
  // leading list markers: "3", "step 3", "step" are noise at the front
  std::size_t start = 0;
  while (start < tokens.size() && (tokens[start] == "step" || all_digits(tokens[start]))) ++start;
  tokens.erase(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(start));
  // bare numbers elsewhere are list markers too; block labels are never pure digits
  tokens.erase(std::remove_if(tokens.begin(), tokens.end(), all_digits), tokens.end());
  return tokens;
}

}  // namespace

LineResult normalize_line(const vocab::Vocabulary& v, const std::vector<BlockId>& blocks,
                          std::string_view line) {
  auto tokens = clean_tokens(line);
  if (tokens.empty()) return Skip{"blank"};

  std::set<BlockId> block_set;
  for (const auto& b : blocks) block_set.insert(text::lower(b));

  // "o"/"obj" stand for "object" unless they are actual block labels here
  for (auto& t : tokens) {
    if ((t == "o" || t == "obj") && block_set.count(t) == 0) t = "object";
  }

  std::vector<bool> used(tokens.size(), false);
  std::set<Op> surface_found;
  for (const Keyword& kw : surface_keywords(v)) {
    for (std::size_t i = 0; i + kw.tokens.size() <= tokens.size(); ++i) {
      if (keyword_at(tokens, i, kw)) {
        surface_found.insert(kw.op);
        consume(used, i, kw.tokens.size());
      }
    }
  }
  std::set<Op> gloss_found;
  for (const Keyword& kw : gloss_keywords()) {
    for (std::size_t i = 0; i + kw.tokens.size() <= tokens.size(); ++i) {
      if (keyword_at(tokens, i, kw)) {
        bool already = false;
        for (std::size_t k = 0; k < kw.tokens.size(); ++k) already |= used[i + k];
        if (already) continue;  // part of a surface keyword
        gloss_found.insert(kw.op);
        consume(used, i, kw.tokens.size());
      }
    }
  }

  Op op;
  if (surface_found.size() == 1) {
    op = *surface_found.begin();  // the variant's own word is authoritative
  } else if (surface_found.size() > 1) {
    return Skip{"ambiguous: multiple action keywords"};
  } else if (gloss_found.size() == 1) {
    op = *gloss_found.begin();
  } else if (gloss_found.size() > 1) {
    return Skip{"ambiguous: multiple action keywords"};
  } else {
    return Skip{"no action keyword"};
  }

  std::vector<BlockId> mentioned;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!used[i] && block_set.count(tokens[i]) > 0) mentioned.push_back(tokens[i]);
  }

  const std::size_t arity = (op == Op::Stack || op == Op::Unstack) ? 2 : 1;
  if (mentioned.size() != arity) {
    return Skip{"arity mismatch: expected " + std::to_string(arity) + " block(s), found " +
                std::to_string(mentioned.size())};
  }
  Action a;
  a.op = op;
  a.block = mentioned[0];
  if (arity == 2) a.target = mentioned[1];
  return a;
}

ExtractedPlan extract_plan(const vocab::Vocabulary& v, const prompts::Instance& instance,
                           const RawResponse& response) {
  ExtractedPlan plan;
  auto [begin, end] = extract_block(response.text);
  plan.span_begin = begin;
  plan.span_end = end;

  auto lines = text::split_lines(std::string_view(response.text).substr(begin, end - begin));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    LineResult r = normalize_line(v, instance.blocks, lines[i]);
    if (auto* action = std::get_if<Action>(&r)) {
      plan.actions.push_back(*action);
    } else {
      const Skip& skip = std::get<Skip>(r);
      if (skip.reason != "blank") {
        plan.dropped.push_back({i, lines[i], skip.reason});
      }
    }
  }
  return plan;
}

}  // namespace tmkbench::extract
