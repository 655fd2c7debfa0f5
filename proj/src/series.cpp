#include "freehardy/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace freehardy {

namespace {

void check_same(const Series& f, const Series& g, const char* op) {
  if (f.alphabet() != g.alphabet()) {
    throw std::invalid_argument(std::string("alphabet mismatch in ") + op + ": " + std::to_string(f.alphabet()) +
                                " vs " + std::to_string(g.alphabet()));
  }
}

void check_letter(int d, int k) {
  if (k < 1 || k > d) {
    throw std::invalid_argument("creation index " + std::to_string(k) + " outside {1,...," + std::to_string(d) + "}");
  }
}

Word prepend(int k, const Word& w) {
  std::vector<int> letters;
  letters.reserve(w.length() + 1);
  letters.push_back(k);
  letters.insert(letters.end(), w.letters().begin(), w.letters().end());
  return Word(w.alphabet(), std::move(letters));
}

Word append(const Word& w, int k) {
  std::vector<int> letters(w.letters().begin(), w.letters().end());
  letters.push_back(k);
  return Word(w.alphabet(), std::move(letters));
}

}  // namespace

Series::Series(int d) : Series(d, 0) {}

Series::Series(int d, int max_degree) : d_(d), max_degree_(max_degree) {
  if (d < 1) throw std::invalid_argument("alphabet size must be positive");
  if (max_degree < 0) throw std::invalid_argument("negative truncation degree");
}

Series Series::basis(const Word& w, cplx c) {
  Series s(w.alphabet(), static_cast<int>(w.length()));
  s.set(w, c);
  return s;
}

Series Series::constant(int d, cplx c) {
  Series s(d);
  s.set(Word(d), c);
  return s;
}

Series Series::from_terms(int d, const std::vector<std::pair<std::vector<int>, cplx>>& terms) {
  Series s(d);
  for (const auto& [letters, c] : terms) s.add_to(Word(d, letters), c);
  return s;
}

int Series::degree() const noexcept {
  return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.length());
}

cplx Series::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? cplx{} : it->second;
}

void Series::set(const Word& w, cplx c) {
  if (w.alphabet() != d_) throw std::invalid_argument("alphabet mismatch: word over " + std::to_string(w.alphabet()) +
                                                      " letters in series over " + std::to_string(d_));
  max_degree_ = std::max(max_degree_, static_cast<int>(w.length()));
  if (c == cplx{}) {
    terms_.erase(w);
  } else {
    terms_.insert_or_assign(w, c);
  }
}

void Series::add_to(const Word& w, cplx c) {
  if (w.alphabet() != d_) throw std::invalid_argument("alphabet mismatch in series update");
  max_degree_ = std::max(max_degree_, static_cast<int>(w.length()));
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  } else if (c == cplx{}) {
    terms_.erase(it);
  }
}

void Series::set_max_degree(int n) { max_degree_ = std::max(n, degree()); }

double Series::norm_squared() const {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::norm(c);
  return s;
}

double Series::norm() const { return std::sqrt(norm_squared()); }

Series Series::truncated(int n) const {
  Series out(d_, std::max(n, 0));
  for (const auto& [w, c] : terms_) {
    if (static_cast<int>(w.length()) > n) break;
    out.terms_.emplace_hint(out.terms_.end(), w, c);
  }
  return out;
}

Series Series::operator-() const {
  Series out(*this);
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

Series& Series::operator+=(const Series& g) {
  check_same(*this, g, "addition");
  for (const auto& [w, c] : g.terms_) add_to(w, c);
  max_degree_ = std::max(max_degree_, g.max_degree_);
  return *this;
}

Series& Series::operator-=(const Series& g) {
  check_same(*this, g, "subtraction");
  for (const auto& [w, c] : g.terms_) add_to(w, -c);
  max_degree_ = std::max(max_degree_, g.max_degree_);
  return *this;
}

Series& Series::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = (it->second == cplx{}) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

double sup_distance(const Series& f, const Series& g) {
  check_same(f, g, "sup_distance");
  double m = 0.0;
  for (const auto& [w, c] : f.terms()) m = std::max(m, std::abs(c - g.coeff(w)));
  for (const auto& [w, c] : g.terms()) {
    if (!f.terms().contains(w)) m = std::max(m, std::abs(c));
  }
  return m;
}

cplx inner_product(const Series& f, const Series& g) {
  check_same(f, g, "inner_product");
  const Series& small = f.size() <= g.size() ? f : g;
  const Series& large = f.size() <= g.size() ? g : f;
  cplx s{};
  for (const auto& [w, c] : small.terms()) {
    auto it = large.terms().find(w);
    if (it == large.terms().end()) continue;
    s += (&small == &f) ? std::conj(c) * it->second : std::conj(it->second) * c;
  }
  return s;
}

Series apply_creation(const Series& f, int k, Side side) {
  check_letter(f.alphabet(), k);
  Series out(f.alphabet(), f.max_degree() + 1);
  for (const auto& [w, c] : f.terms()) out.set(side == Side::Left ? prepend(k, w) : append(w, k), c);
  return out;
}

Series apply_creation_adjoint(const Series& f, int k, Side side) {
  check_letter(f.alphabet(), k);
  Series out(f.alphabet(), std::max(f.max_degree() - 1, 0));
  for (const auto& [w, c] : f.terms()) {
    if (w.empty()) continue;
    if (side == Side::Left && w[0] == k) out.set(w.tail(), c);
    if (side == Side::Right && w[w.length() - 1] == k) out.set(w.init(), c);
  }
  return out;
}

Series apply_word(const Series& f, const Word& w, Side side) {
  if (w.alphabet() != f.alphabet()) throw std::invalid_argument("alphabet mismatch in apply_word");
  Series out(f.alphabet(), f.max_degree() + static_cast<int>(w.length()));
  for (const auto& [u, c] : f.terms()) out.set(side == Side::Left ? concat(w, u) : concat(u, w), c);
  return out;
}

Series multiply(const Series& f, const Series& g, int degree_cap) {
  check_same(f, g, "multiply");
  if (degree_cap < 0) throw std::invalid_argument("negative degree cap");
  Series out(f.alphabet(), degree_cap);
  for (const auto& [a, fa] : f.terms()) {
    const int la = static_cast<int>(a.length());
    if (la > degree_cap) break;
    for (const auto& [b, gb] : g.terms()) {
      if (la + static_cast<int>(b.length()) > degree_cap) break;
      out.add_to(concat(a, b), fa * gb);
    }
  }
  return out;
}

Series solve_left(const Series& a, const Series& b, int n) {
  check_same(a, b, "solve_left");
  if (n < 0) throw std::invalid_argument("negative degree");
  const Word unit(a.alphabet());
  const cplx a0 = a.coeff(unit);
  if (a0 == cplx{}) throw std::domain_error("non-invertible constant term");

  // x_c = (b_c - sum_{c = uv, |u| >= 1} a_u x_v) / a_0, filled degree by degree.
  std::vector<std::pair<Word, cplx>> higher;  // terms of a with |u| >= 1
  for (const auto& [u, c] : a.terms()) {
    if (!u.empty()) higher.emplace_back(u, c);
  }
  std::vector<Series::Terms> by_degree(static_cast<std::size_t>(n) + 1);
  for (const auto& [w, c] : b.terms()) {
    if (static_cast<int>(w.length()) > n) break;
    by_degree[w.length()][w] += c;
  }
  Series x(a.alphabet(), n);
  for (int k = 0; k <= n; ++k) {
    Series::Terms& level = by_degree[static_cast<std::size_t>(k)];
    for (auto& [w, c] : level) {
      const cplx xw = c / a0;
      if (xw == cplx{}) continue;
      x.set(w, xw);
      for (const auto& [u, au] : higher) {
        const int len = k + static_cast<int>(u.length());
        if (len > n) continue;
        by_degree[static_cast<std::size_t>(len)][concat(u, w)] -= au * xw;
      }
    }
  }
  return x;
}

Series transpose_unitary(const Series& f) {
  Series out(f.alphabet(), f.max_degree());
  for (const auto& [w, c] : f.terms()) out.set(transpose(w), c);
  return out;
}

Eigen::VectorXcd to_dense(const Series& f, int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(count_words(f.alphabet(), n)));
  for (const auto& [w, c] : f.terms()) {
    if (static_cast<int>(w.length()) > n) break;
    v(static_cast<Eigen::Index>(rank(w))) = c;
  }
  return v;
}

Series from_dense(int d, const Eigen::VectorXcd& coeffs, int n) {
  if (static_cast<std::uint64_t>(coeffs.size()) != count_words(d, n)) {
    throw std::invalid_argument("dense vector length does not match words of length <= " + std::to_string(n));
  }
  Series out(d, n);
  const std::vector<Word> words = enumerate_words(d, n);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    if (coeffs(i) != cplx{}) out.set(words[static_cast<std::size_t>(i)], coeffs(i));
  }
  return out;
}

SeriesColumn::SeriesColumn(Series t, Series b) : top(std::move(t)), bottom(std::move(b)) {
  check_same(top, bottom, "SeriesColumn");
}

double SeriesColumn::norm() const { return std::sqrt(norm_squared()); }

cplx inner_product(const SeriesColumn& x, const SeriesColumn& y) {
  return inner_product(x.top, y.top) + inner_product(x.bottom, y.bottom);
}

}  // namespace freehardy
