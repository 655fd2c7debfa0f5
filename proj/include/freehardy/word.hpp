#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace freehardy {

/// A word in the free monoid on the letters {1, ..., d}.
///
/// Letters are 1-based. The empty word is the unit. Every word carries its
/// alphabet size so that operations can reject cross-alphabet mixing.
class Word {
 public:
  explicit Word(int d);
  Word(int d, std::vector<int> letters);
  Word(int d, std::initializer_list<int> letters);

  int alphabet() const noexcept { return d_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const int> letters() const noexcept { return letters_; }
  int operator[](std::size_t i) const { return letters_[i]; }

  /// Word with the first letter removed. Requires a non-empty word.
  Word tail() const;
  /// Word with the last letter removed. Requires a non-empty word.
  Word init() const;
  bool has_prefix(const Word& p) const noexcept;
  bool has_suffix(const Word& s) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Word& a, const Word& b) noexcept {
    return a.d_ == b.d_ && a.letters_ == b.letters_;
  }

 private:
  int d_;
  std::vector<int> letters_;
};

/// Graded-lexicographic order: shorter words first, then lexicographic.
struct GradedLess {
  bool operator()(const Word& a, const Word& b) const noexcept;
};

Word concat(const Word& a, const Word& b);
Word transpose(const Word& a);

/// Number of words of length <= max_len over d letters.
std::uint64_t count_words(int d, int max_len);
/// Number of words of length < len (the rank of the first word of that length).
std::uint64_t level_offset(int d, int len);
/// d^k, with overflow checking.
std::uint64_t ipow(int d, int k);

/// Position of the word among the letters-{1..d} words in graded-lex order.
std::uint64_t rank(const Word& w);
/// Inverse of rank().
Word unrank(std::uint64_t index, int d);
/// As unrank(), but rejects indices outside the words of length <= max_len.
Word unrank(std::uint64_t index, int d, int max_len);

/// All words of length <= max_len, in rank order.
std::vector<Word> enumerate_words(int d, int max_len);

/// Position of a word among the words of its own length (lexicographic).
std::uint64_t lex_index(const Word& w);

}  // namespace freehardy
