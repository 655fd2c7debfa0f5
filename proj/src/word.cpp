#include "freehardy/word.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace freehardy {

namespace {

void check_alphabet(int d) {
  if (d < 1) throw std::invalid_argument("alphabet size must be positive, got " + std::to_string(d));
}

void check_letters(int d, const std::vector<int>& letters) {
  for (int l : letters) {
    if (l < 1 || l > d) {
      throw std::invalid_argument("letter " + std::to_string(l) + " outside {1,...," + std::to_string(d) + "}");
    }
  }
}

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMax / a) throw std::overflow_error("word index overflows 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > kMax - a) throw std::overflow_error("word index overflows 64 bits");
  return a + b;
}

}  // namespace

Word::Word(int d) : d_(d) { check_alphabet(d); }

Word::Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
  check_alphabet(d);
  check_letters(d, letters_);
}

Word::Word(int d, std::initializer_list<int> letters) : Word(d, std::vector<int>(letters)) {}

Word Word::tail() const {
  if (empty()) throw std::logic_error("tail of the empty word");
  return Word(d_, std::vector<int>(letters_.begin() + 1, letters_.end()));
}

Word Word::init() const {
  if (empty()) throw std::logic_error("init of the empty word");
  return Word(d_, std::vector<int>(letters_.begin(), letters_.end() - 1));
}

bool Word::has_prefix(const Word& p) const noexcept {
  return p.length() <= length() && std::equal(p.letters_.begin(), p.letters_.end(), letters_.begin());
}

bool Word::has_suffix(const Word& s) const noexcept {
  return s.length() <= length() && std::equal(s.letters_.rbegin(), s.letters_.rend(), letters_.rbegin());
}

std::string Word::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(letters_[i]);
  }
  return out + "]";
}

bool GradedLess::operator()(const Word& a, const Word& b) const noexcept {
  if (a.length() != b.length()) return a.length() < b.length();
  auto la = a.letters();
  auto lb = b.letters();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

Word concat(const Word& a, const Word& b) {
  if (a.alphabet() != b.alphabet()) {
    throw std::invalid_argument("alphabet mismatch in concat: " + std::to_string(a.alphabet()) + " vs " +
                                std::to_string(b.alphabet()));
  }
  std::vector<int> letters(a.letters().begin(), a.letters().end());
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return Word(a.alphabet(), std::move(letters));
}

Word transpose(const Word& a) {
  std::vector<int> letters(a.letters().rbegin(), a.letters().rend());
  return Word(a.alphabet(), std::move(letters));
}

std::uint64_t ipow(int d, int k) {
  std::uint64_t p = 1;
  for (int i = 0; i < k; ++i) p = checked_mul(p, static_cast<std::uint64_t>(d));
  return p;
}

std::uint64_t level_offset(int d, int len) {
  check_alphabet(d);
  if (len < 0) throw std::invalid_argument("negative word length");
  if (d == 1) return static_cast<std::uint64_t>(len);
  // (d^len - 1)/(d - 1), accumulated to keep the overflow check exact.
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (int k = 0; k < len; ++k) {
    total = checked_add(total, level);
    if (k + 1 < len) level = checked_mul(level, static_cast<std::uint64_t>(d));
  }
  return total;
}

std::uint64_t count_words(int d, int max_len) {
  if (max_len < 0) return 0;
  return level_offset(d, max_len + 1);
}

std::uint64_t lex_index(const Word& w) {
  std::uint64_t idx = 0;
  for (int l : w.letters()) {
    idx = checked_add(checked_mul(idx, static_cast<std::uint64_t>(w.alphabet())), static_cast<std::uint64_t>(l - 1));
  }
  return idx;
}

std::uint64_t rank(const Word& w) {
  return checked_add(level_offset(w.alphabet(), static_cast<int>(w.length())), lex_index(w));
}

Word unrank(std::uint64_t index, int d) {
  check_alphabet(d);
  int len = 0;
  std::uint64_t offset = 0;
  std::uint64_t level = 1;
  while (index - offset >= level) {
    offset += level;
    ++len;
    if (d > 1) {
      if (level > kMax / static_cast<std::uint64_t>(d)) break;
      level *= static_cast<std::uint64_t>(d);
    }
  }
  std::uint64_t lex = index - offset;
  std::vector<int> letters(static_cast<std::size_t>(len));
  for (int i = len - 1; i >= 0; --i) {
    letters[static_cast<std::size_t>(i)] = static_cast<int>(lex % static_cast<std::uint64_t>(d)) + 1;
    lex /= static_cast<std::uint64_t>(d);
  }
  return Word(d, std::move(letters));
}

Word unrank(std::uint64_t index, int d, int max_len) {
  if (index >= count_words(d, max_len)) {
    throw std::out_of_range("word index " + std::to_string(index) + " outside words of length <= " +
                            std::to_string(max_len));
  }
  return unrank(index, d);
}

std::vector<Word> enumerate_words(int d, int max_len) {
  std::vector<Word> out;
  if (max_len < 0) return out;
  out.reserve(static_cast<std::size_t>(count_words(d, max_len)));
  out.emplace_back(d);
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int k = 1; k <= d; ++k) {
        std::vector<int> letters(out[i].letters().begin(), out[i].letters().end());
        letters.push_back(k);
        out.emplace_back(d, std::move(letters));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace freehardy
