#include "schottky/word.hpp"

#include <cmath>
#include <stdexcept>

namespace schottky {

namespace {

int conj_letter(int letter, int d) { return (letter + d) % (2 * d); }

void check_admissible(const Word& w, int d) {
  if (!w.is_admissible(d)) throw std::invalid_argument("inadmissible word");
}

}  // namespace

bool Word::is_admissible(int d) const {
  int two_d = 2 * d;
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (letters[j] < 0 || letters[j] >= two_d) return false;
    if (j + 1 < letters.size() && letters[j + 1] == conj_letter(letters[j], d)) return false;
  }
  return true;
}

Word Word::parent() const {
  Word w = *this;
  if (!w.letters.empty()) w.letters.pop_back();
  return w;
}

Word Word::tail() const {
  if (letters.empty()) return {};
  return Word{{letters.begin() + 1, letters.end()}};
}

Word Word::mirror(int d) const {
  Word w;
  w.letters.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    w.letters.push_back(conj_letter(*it, d));
  return w;
}

bool Word::can_concat(const Word& next, int d) const {
  if (empty() || next.empty()) return true;
  return next.letters.front() != conj_letter(letters.back(), d);
}

Word Word::concat(const Word& next) const {
  Word w = *this;
  w.letters.insert(w.letters.end(), next.letters.begin(), next.letters.end());
  return w;
}

std::vector<Word> enumerate_words(int d, int n) {
  if (n < 0) throw std::invalid_argument("word length must be non-negative");
  std::vector<Word> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  int two_d = 2 * d;
  std::vector<int> stack;
  stack.reserve(n);
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(stack.size()) == n) {
      out.push_back(Word{stack});
      return;
    }
    for (int next = 0; next < two_d; ++next) {
      if (!stack.empty() && next == conj_letter(stack.back(), d)) continue;
      stack.push_back(next);
      self(self);
      stack.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

Mobius word_matrix(const SchottkyData& data, const Word& w) {
  check_admissible(w, data.d);
  Mobius m = Mobius::identity();
  for (int letter : w.letters) m = m * data.generators[letter];
  return m;
}

double interval_length(const SchottkyData& data, const Word& w) {
  return std::exp(log_interval_length(data, w));
}

double log_interval_length(const SchottkyData& data, const Word& w) {
  if (w.empty()) throw std::invalid_argument("interval length needs a nonempty word");
  check_admissible(w, data.d);
  // |m(b) - m(a)| = |b - a| * det(m) / (|c a + d| |c b + d|), free of the
  // catastrophic cancellation the direct difference would suffer. det(m)
  // is accumulated from the per-letter determinants: recomputing it from
  // the grown product entries loses every digit past length ~10.
  Mobius m = Mobius::identity();
  double log_det = 0.0;
  for (std::size_t j = 0; j + 1 < w.letters.size(); ++j) {
    m = m * data.generators[w.letters[j]];
    log_det += std::log(data.generators[w.letters[j]].det());
  }
  const Disc& disc = data.discs[w.letters.back()];
  double ta = std::abs(m.c * disc.left() + m.d);
  double tb = std::abs(m.c * disc.right() + m.d);
  return std::log(2.0 * disc.radius) + log_det - std::log(ta) - std::log(tb);
}

Complex tau_word(const SchottkyData& data, const Word& w, Complex z) {
  check_admissible(w, data.d);
  constexpr double kDomainSlack = 1e-12;
  Complex acc = 0.0;
  Complex zt = z;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const Mobius& g = data.generators[*it];
    acc -= std::log(g.deriv(zt));
    zt = g.apply(zt);
    bool inside = false;
    for (const Disc& disc : data.discs)
      if (disc.contains_closed(zt, kDomainSlack)) {
        inside = true;
        break;
      }
    if (!inside)
      throw std::domain_error("tau_word: intermediate image left the disc union");
  }
  return acc;
}

}  // namespace schottky
