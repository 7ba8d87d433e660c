#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "paradigm/utf8.hpp"

namespace paradigm {

// Position and length of a longest common substring: a[i, i+k) == b[j, j+k).
struct CommonSubstring {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  friend bool operator==(const CommonSubstring&, const CommonSubstring&) = default;
};

// Longest common substring over code points. Ties go to the smallest i, then
// the smallest j; with no shared character the result is (0, 0, 0).
inline CommonSubstring longest_common_substring(std::u32string_view a, std::u32string_view b) {
  CommonSubstring best;
  if (a.empty() || b.empty()) return best;
  // run[y] = length of the common suffix of a[..x) and b[..y)
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t x = 1; x <= a.size(); ++x) {
    for (std::size_t y = 1; y <= b.size(); ++y) {
      cur[y] = a[x - 1] == b[y - 1] ? prev[y - 1] + 1 : 0;
      const std::size_t k = cur[y];
      if (k == 0) continue;
      const std::size_t i = x - k, j = y - k;
      if (k > best.k || (k == best.k && (i < best.i || (i == best.i && j < best.j)))) best = {i, j, k};
    }
    std::swap(prev, cur);
  }
  return best;
}

inline CommonSubstring longest_common_substring(std::string_view a, std::string_view b) {
  return longest_common_substring(utf8::decode(a), utf8::decode(b));
}

// Lemma-to-form transformation built by recursive longest-common-substring
// decomposition. Nodes are immutable and children are shared between copies.
class EditTree {
 public:
  struct Replace {
    std::u32string source;
    std::u32string target;
  };
  struct Match {
    std::size_t prefix_len = 0;
    std::size_t suffix_len = 0;
    std::shared_ptr<const EditTree> left;
    std::shared_ptr<const EditTree> right;
  };

  static EditTree replace(std::u32string source, std::u32string target) {
    return EditTree(Replace{std::move(source), std::move(target)});
  }

  static EditTree match(std::size_t prefix_len, std::size_t suffix_len, EditTree left, EditTree right) {
    return EditTree(Match{prefix_len, suffix_len, std::make_shared<const EditTree>(std::move(left)),
                          std::make_shared<const EditTree>(std::move(right))});
  }

  bool is_replace() const noexcept { return std::holds_alternative<Replace>(node_); }
  bool is_match() const noexcept { return std::holds_alternative<Match>(node_); }
  const Replace& as_replace() const { return std::get<Replace>(node_); }
  const Match& as_match() const { return std::get<Match>(node_); }

  friend bool operator==(const EditTree& a, const EditTree& b) {
    if (a.node_.index() != b.node_.index()) return false;
    if (a.is_replace()) {
      const auto& x = a.as_replace();
      const auto& y = b.as_replace();
      return x.source == y.source && x.target == y.target;
    }
    const auto& x = a.as_match();
    const auto& y = b.as_match();
    return x.prefix_len == y.prefix_len && x.suffix_len == y.suffix_len && *x.left == *y.left &&
           *x.right == *y.right;
  }

 private:
  explicit EditTree(std::variant<Replace, Match> node) : node_(std::move(node)) {}

  std::variant<Replace, Match> node_;
};

inline EditTree build_tree(std::u32string_view lemma, std::u32string_view form) {
  const auto lcs = longest_common_substring(lemma, form);
  if (lcs.k == 0) return EditTree::replace(std::u32string(lemma), std::u32string(form));
  return EditTree::match(lcs.i, lemma.size() - (lcs.i + lcs.k),
                         build_tree(lemma.substr(0, lcs.i), form.substr(0, lcs.j)),
                         build_tree(lemma.substr(lcs.i + lcs.k), form.substr(lcs.j + lcs.k)));
}

inline EditTree build_tree(std::string_view lemma, std::string_view form) {
  return build_tree(utf8::decode(lemma), utf8::decode(form));
}

namespace detail {

inline bool apply_into(const EditTree& tree, std::u32string_view word, std::u32string& out) {
  if (tree.is_replace()) {
    const auto& r = tree.as_replace();
    if (word != r.source) return false;
    out.append(r.target);
    return true;
  }
  const auto& m = tree.as_match();
  if (word.size() < m.prefix_len + m.suffix_len + 1) return false;
  if (!apply_into(*m.left, word.substr(0, m.prefix_len), out)) return false;
  out.append(word.substr(m.prefix_len, word.size() - m.prefix_len - m.suffix_len));
  return apply_into(*m.right, word.substr(word.size() - m.suffix_len), out);
}

inline void append_escaped(std::string& out, std::u32string_view s) {
  for (char32_t cp : s) {
    if (cp == U'\\' || cp == U',' || cp == U'(' || cp == U')') out.push_back('\\');
    utf8::append(out, cp);
  }
}

inline void append_key(std::string& out, const EditTree& tree) {
  if (tree.is_replace()) {
    const auto& r = tree.as_replace();
    out += "R(";
    append_escaped(out, r.source);
    out.push_back(',');
    append_escaped(out, r.target);
    out.push_back(')');
    return;
  }
  const auto& m = tree.as_match();
  out += "M(";
  out += std::to_string(m.prefix_len);
  out.push_back(',');
  out += std::to_string(m.suffix_len);
  out.push_back(',');
  append_key(out, *m.left);
  out.push_back(',');
  append_key(out, *m.right);
  out.push_back(')');
}

class KeyParser {
 public:
  explicit KeyParser(std::u32string text) : text_(std::move(text)) {}

  EditTree parse() {
    EditTree tree = node();
    if (pos_ != text_.size()) fail();
    return tree;
  }

 private:
  EditTree node() {
    if (peek() == U'R') {
      ++pos_;
      expect(U'(');
      auto source = escaped();
      expect(U',');
      auto target = escaped();
      expect(U')');
      return EditTree::replace(std::move(source), std::move(target));
    }
    if (peek() == U'M') {
      ++pos_;
      expect(U'(');
      const auto prefix = number();
      expect(U',');
      const auto suffix = number();
      expect(U',');
      auto left = node();
      expect(U',');
      auto right = node();
      expect(U')');
      return EditTree::match(prefix, suffix, std::move(left), std::move(right));
    }
    fail();
  }

  std::u32string escaped() {
    std::u32string out;
    while (pos_ < text_.size() && text_[pos_] != U',' && text_[pos_] != U')') {
      if (text_[pos_] == U'(') fail();
      if (text_[pos_] == U'\\') {
        if (++pos_ >= text_.size()) fail();
      }
      out.push_back(text_[pos_++]);
    }
    return out;
  }

  std::size_t number() {
    std::size_t value = 0;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= U'0' && text_[pos_] <= U'9') {
      value = value * 10 + (text_[pos_++] - U'0');
    }
    if (pos_ == start) fail();
    return value;
  }

  char32_t peek() const { return pos_ < text_.size() ? text_[pos_] : 0; }

  void expect(char32_t c) {
    if (peek() != c) fail();
    ++pos_;
  }

  [[noreturn]] void fail() const {
    throw Error("malformed edit tree key: '" + utf8::encode(text_) + "' at " + std::to_string(pos_));
  }

  std::u32string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Applies the tree to a word; std::nullopt when the tree does not fit.
inline std::optional<std::u32string> apply_tree(const EditTree& tree, std::u32string_view word) {
  std::u32string out;
  if (!detail::apply_into(tree, word, out)) return std::nullopt;
  return out;
}

inline std::optional<std::string> apply_tree(const EditTree& tree, std::string_view word) {
  auto result = apply_tree(tree, std::u32string_view(utf8::decode(word)));
  if (!result) return std::nullopt;
  return utf8::encode(*result);
}

// Canonical, injective text form: R(source,target) and M(prefix,suffix,left,right),
// with '\', ',', '(' and ')' inside strings backslash-escaped.
inline std::string tree_key(const EditTree& tree) {
  std::string out;
  detail::append_key(out, tree);
  return out;
}

inline EditTree parse_tree_key(std::string_view key) { return detail::KeyParser(utf8::decode(key)).parse(); }

}  // namespace paradigm

template <>
struct std::hash<paradigm::EditTree> {
  std::size_t operator()(const paradigm::EditTree& tree) const { return std::hash<std::string>{}(paradigm::tree_key(tree)); }
};
