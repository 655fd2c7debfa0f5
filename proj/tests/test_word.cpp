#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "freehardy/word.hpp"

using namespace freehardy;

namespace {

// Brute-force graded-lex enumeration: breadth-first extension by letters 1..d.
std::vector<std::vector<int>> brute_words(int d, int max_len) {
  std::vector<std::vector<int>> out{{}};
  std::size_t level_start = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i) {
      for (int k = 1; k <= d; ++k) {
        auto w = out[i];
        w.push_back(k);
        out.push_back(w);
      }
    }
    level_start = level_end;
  }
  return out;
}

}  // namespace

TEST_CASE("concat") {
  CHECK(concat(Word(2, {1, 2}), Word(2, {2, 1})) == Word(2, {1, 2, 2, 1}));
  CHECK(concat(Word(2), Word(2, {2})) == Word(2, {2}));
  CHECK(concat(Word(2, {1}), Word(2)) == Word(2, {1}));
  CHECK_THROWS_AS(concat(Word(2, {1}), Word(3, {1})), std::invalid_argument);
}

TEST_CASE("letters outside the alphabet are rejected") {
  CHECK_THROWS(Word(2, {3}));
  CHECK_THROWS(Word(2, {0}));
}

TEST_CASE("transpose") {
  CHECK(transpose(Word(3, {1, 2, 3})) == Word(3, {3, 2, 1}));
  CHECK(transpose(Word(3)) == Word(3));
  CHECK(transpose(Word(2, {1, 1, 2})) == Word(2, {2, 1, 1}));
}

TEST_CASE("transpose is an involutive anti-homomorphism") {
  for (int d = 1; d <= 3; ++d) {
    const auto words = enumerate_words(d, d == 3 ? 4 : 6);
    for (const Word& a : words) {
      CHECK(transpose(transpose(a)) == a);
    }
    const auto small = enumerate_words(d, 3);
    for (const Word& a : small) {
      for (const Word& b : small) CHECK(transpose(concat(a, b)) == concat(transpose(b), transpose(a)));
    }
  }
}

TEST_CASE("rank examples") {
  CHECK(rank(Word(2)) == 0);
  CHECK(rank(Word(2, {1})) == 1);
  CHECK(rank(Word(2, {2})) == 2);
  CHECK(rank(Word(2, {1, 1})) == 3);
  CHECK(rank(Word(2, {1, 2})) == 4);
  CHECK(rank(Word(1, {1, 1, 1})) == 3);
  CHECK(unrank(4, 2) == Word(2, {1, 2}));
}

TEST_CASE("rank agrees with brute-force enumeration") {
  for (int d = 1; d <= 3; ++d) {
    const int n = d == 1 ? 10 : 6;
    const auto brute = brute_words(d, n);
    REQUIRE(count_words(d, n) == brute.size());
    const auto words = enumerate_words(d, n);
    REQUIRE(words.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i) {
      const Word w(d, brute[i]);
      CHECK(words[i] == w);
      CHECK(rank(w) == i);
      CHECK(unrank(i, d) == w);
      CHECK(unrank(i, d, n) == w);
    }
  }
}

TEST_CASE("levels occupy consecutive rank blocks") {
  for (int d = 2; d <= 4; ++d) {
    for (int k = 0; k <= 5; ++k) {
      // (d^k - 1)/(d - 1)
      std::uint64_t expect = 0;
      for (int i = 0; i < k; ++i) expect = expect * static_cast<std::uint64_t>(d) + 1;
      CHECK(level_offset(d, k) == expect);
    }
  }
  CHECK(level_offset(1, 7) == 7);
}

TEST_CASE("enumeration is graded") {
  const auto words = enumerate_words(3, 4);
  for (std::size_t i = 1; i < words.size(); ++i) {
    CHECK(words[i - 1].length() <= words[i].length());
    CHECK(GradedLess{}(words[i - 1], words[i]));
  }
}

TEST_CASE("rank of a concatenation") {
  const int d = 3;
  for (const Word& u : enumerate_words(d, 3)) {
    for (const Word& v : enumerate_words(d, 2)) {
      const std::uint64_t expect = level_offset(d, static_cast<int>(u.length() + v.length())) +
                                   lex_index(u) * ipow(d, static_cast<int>(v.length())) + lex_index(v);
      CHECK(rank(concat(u, v)) == expect);
    }
  }
}

TEST_CASE("unrank out of range") {
  CHECK_THROWS_AS(unrank(7, 2, 2), std::out_of_range);
  CHECK_NOTHROW(unrank(6, 2, 2));
}

TEST_CASE("prefix and suffix") {
  const Word w(2, {1, 2, 2});
  CHECK(w.has_prefix(Word(2, {1, 2})));
  CHECK(w.has_prefix(Word(2)));
  CHECK_FALSE(w.has_prefix(Word(2, {2})));
  CHECK(w.has_suffix(Word(2, {2, 2})));
  CHECK(w.tail() == Word(2, {2, 2}));
  CHECK(w.init() == Word(2, {1, 2}));
}
