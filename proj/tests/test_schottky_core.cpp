#include <doctest.h>

#include <cmath>
#include <complex>

#include "schottky/rng.hpp"
#include "schottky/schottky_data.hpp"
#include "schottky/word.hpp"

using namespace schottky;

namespace {

Word random_word(SplitMix64& rng, int d, int max_len) {
  int len = 1 + static_cast<int>(rng.next_below(max_len));
  Word w;
  w.letters.push_back(static_cast<int>(rng.next_below(2 * d)));
  while (w.length() < len) {
    int next = static_cast<int>(rng.next_below(2 * d));
    if (next == (w.letters.back() + d) % (2 * d)) continue;
    w.letters.push_back(next);
  }
  return w;
}

}  // namespace

TEST_CASE("builder reproduces the reference generator and its boundary action") {
  SchottkyData data = reference_schottky();
  REQUIRE(data.d == 2);
  const Mobius& g = data.generators[0];
  CHECK(g.a == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(g.b == doctest::Approx(-35.0).epsilon(1e-14));
  CHECK(g.c == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(g.d == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(std::abs(g.det() - 1.0) < 1e-12);
  // Endpoints of I_2 (third disc) land on the endpoints of I_0.
  CHECK(g.apply(7.0) == doctest::Approx(-7.0).epsilon(1e-13));
  CHECK(g.apply(5.0) == doctest::Approx(-5.0).epsilon(1e-13));
}

TEST_CASE("paired generators are inverse up to overall sign") {
  SchottkyData data = reference_schottky();
  for (int i = 0; i < 4; ++i) {
    Mobius p = data.generators[data.conj(i)] * data.generators[i];
    double fwd = std::max({std::abs(p.a - 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d - 1.0)});
    double rev = std::max({std::abs(p.a + 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d + 1.0)});
    CHECK(std::min(fwd, rev) < 1e-12);
  }
}

TEST_CASE("builder rejects bad disc data") {
  CHECK_THROWS_AS(build_symmetric_schottky({-1.0, 1.0, 0.5, 2.0}, {1.0, 1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_symmetric_schottky({-6.0, -2.0, 6.0, 2.0}, {1.0, -0.5, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("validation accepts the reference configuration") {
  ValidationReport report = validate_schottky(reference_schottky(), 1e-10);
  CHECK(report.ok());
  CHECK(report.max_boundary_error < 1e-10);
  CHECK(report.max_determinant_error < 1e-12);
}

TEST_CASE("validation flags swapped pairing") {
  SchottkyData data = reference_schottky();
  std::swap(data.generators[0], data.generators[1]);
  ValidationReport report = validate_schottky(data, 1e-10);
  CHECK(!report.ok());
  bool has_pairing = false;
  for (const auto& v : report.violations)
    if (v.find("inverse-pairing") != std::string::npos) has_pairing = true;
  CHECK(has_pairing);
}

TEST_CASE("validation flags overlapping discs") {
  SchottkyData data = reference_schottky();
  data.discs[1].center = data.discs[0].center + 0.5;
  ValidationReport report = validate_schottky(data, 1e-10);
  CHECK(!report.ok());
  bool has_disjoint = false;
  for (const auto& v : report.violations)
    if (v.find("disjointness") != std::string::npos) has_disjoint = true;
  CHECK(has_disjoint);
}

TEST_CASE("word combinatorics") {
  Word w{{0, 1, 0}};
  CHECK(w.is_admissible(2));
  CHECK(!Word{{0, 2}}.is_admissible(2));  // 2 = conj(0)
  CHECK(w.parent() == Word{{0, 1}});
  CHECK(w.tail() == Word{{1, 0}});
  CHECK(w.mirror(2) == Word{{2, 3, 2}});
  CHECK(Word{{0}}.can_concat(Word{{1}}, 2));
  CHECK(!Word{{0}}.can_concat(Word{{2}}, 2));
  CHECK(Word{{0}}.can_concat(Word{}, 2));
}

TEST_CASE("enumerate_words counts and ordering") {
  CHECK(enumerate_words(2, 3).size() == 36);
  auto n0 = enumerate_words(2, 0);
  REQUIRE(n0.size() == 1);
  CHECK(n0[0].empty());
  auto n1 = enumerate_words(2, 1);
  REQUIRE(n1.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(n1[i] == Word{{i}});
  auto n4 = enumerate_words(2, 4);
  CHECK(n4.size() == 108);
  for (std::size_t k = 0; k < n4.size(); ++k) {
    CHECK(n4[k].is_admissible(2));
    if (k > 0) CHECK(n4[k - 1].letters < n4[k].letters);  // lexicographic
  }
}

TEST_CASE("word_matrix products") {
  SchottkyData data = reference_schottky();
  Mobius id = word_matrix(data, Word{});
  CHECK(id.a == 1.0);
  CHECK(id.b == 0.0);
  CHECK(id.c == 0.0);
  CHECK(id.d == 1.0);
  Mobius g01 = word_matrix(data, Word{{0, 1}});
  Mobius direct = data.generators[0] * data.generators[1];
  CHECK(std::abs(g01.a - direct.a) < 1e-12);
  CHECK(std::abs(g01.det() - 1.0) < 1e-12);
  CHECK_THROWS_AS(word_matrix(data, Word{{0, 2}}), std::invalid_argument);

  // mirror word gives the inverse matrix up to sign
  SplitMix64 rng(11);
  for (int t = 0; t < 50; ++t) {
    Word w = random_word(rng, 2, 8);
    Mobius p = word_matrix(data, w) * word_matrix(data, w.mirror(2));
    double fwd = std::max({std::abs(p.a - 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d - 1.0)});
    double rev = std::max({std::abs(p.a + 1.0), std::abs(p.b), std::abs(p.c), std::abs(p.d + 1.0)});
    CHECK(std::min(fwd, rev) < 1e-9);
  }
}

TEST_CASE("interval lengths") {
  SchottkyData data = reference_schottky();
  CHECK(interval_length(data, Word{{0}}) == doctest::Approx(2.0).epsilon(1e-14));
  // gamma_0 maps (-3,-1) to (-41/7, -53/9): length 2/63
  CHECK(interval_length(data, Word{{0, 1}}) == doctest::Approx(2.0 / 63.0).epsilon(1e-12));
  CHECK_THROWS_AS(interval_length(data, Word{}), std::invalid_argument);

  // nesting: the child interval sits inside the parent
  for (const Word& w : enumerate_words(2, 5))
    CHECK(interval_length(data, w) <= interval_length(data, w.parent()) * (1.0 + 1e-12));
}

TEST_CASE("tau_word values, reality, chain rule, domain") {
  SchottkyData data = reference_schottky();
  CHECK(std::abs(tau_word(data, Word{{0}}, Complex(7.0, 0.0))) < 1e-14);

  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    Word w = random_word(rng, 2, 6);
    // z real inside a disc admissible for the last letter
    int from = -1;
    for (int c = 0; c < 4; ++c)
      if (c != (w.letters.back() + 2) % 4) from = c;
    Complex z(data.discs[from].center + 0.3, 0.0);
    CHECK(std::abs(tau_word(data, w, z).imag()) < 1e-12);
  }

  // Birkhoff sums telescope across any split of the word.
  for (int t = 0; t < 20; ++t) {
    Word w = random_word(rng, 2, 7);
    if (w.length() < 2) continue;
    int cut = 1 + static_cast<int>(rng.next_below(w.length() - 1));
    Word u{{w.letters.begin(), w.letters.begin() + cut}};
    Word v{{w.letters.begin() + cut, w.letters.end()}};
    int from = -1;
    for (int c = 0; c < 4; ++c)
      if (c != (w.letters.back() + 2) % 4) from = c;
    Complex z(data.discs[from].center + 0.2, 0.1);
    Complex whole = tau_word(data, w, z);
    Complex split = tau_word(data, u, word_matrix(data, v).apply(z)) + tau_word(data, v, z);
    CHECK(std::abs(whole - split) < 1e-12);
  }

  CHECK_THROWS_AS(tau_word(data, Word{{0}}, Complex(6.5, 0.0)), std::domain_error);
}

TEST_CASE("distortion constants are finite and derivative-comparable") {
  SchottkyData data = reference_schottky();
  std::vector<Word> words;
  std::vector<double> logup;
  for (int len = 1; len <= 5; ++len)
    for (auto& w : enumerate_words(2, len)) {
      words.push_back(w);
      logup.push_back(log_interval_length(data, w));
    }
  double k_mult = 1.0;
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (!words[i].can_concat(words[j], 2)) continue;
      double lu = log_interval_length(data, words[i].concat(words[j]));
      double ratio = std::exp(lu - logup[i] - logup[j]);
      k_mult = std::max({k_mult, ratio, 1.0 / ratio});
    }
  CHECK(std::isfinite(k_mult));

  double k_mirror = 1.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    double ratio = std::exp(logup[i] - log_interval_length(data, words[i].mirror(2)));
    k_mirror = std::max({k_mirror, ratio, 1.0 / ratio});
  }
  CHECK(std::isfinite(k_mirror));

  // |gamma'_{w'}(x)| / Upsilon_w within [1/K, K] for the same empirical K
  double k_all = std::max(k_mult, k_mirror);
  SplitMix64 rng(21);
  double k_deriv = 1.0;
  for (int t = 0; t < 100; ++t) {
    Word w = random_word(rng, 2, 8);
    Mobius prefix = word_matrix(data, w.parent());
    const Disc& disc = data.discs[w.letters.back()];
    for (int q = 0; q < 10; ++q) {
      double x = disc.center + disc.radius * (2.0 * rng.next_unit() - 1.0) * 0.999;
      double ratio = std::abs(prefix.deriv(Complex(x, 0.0))) /
                     interval_length(data, w);
      k_deriv = std::max({k_deriv, ratio, 1.0 / ratio});
      CHECK(ratio <= k_all * 10.0);  // same-K containment, with slack for the short sample
      CHECK(ratio >= 1.0 / (k_all * 10.0));
    }
  }
  CHECK(std::isfinite(k_deriv));
}

TEST_CASE("exponential bound: sup of Upsilon^(1/N) below one and non-increasing") {
  SchottkyData data = reference_schottky();
  double prev = 1.0;
  for (int n = 2; n <= 8; ++n) {
    double best = -1e300;
    for (const Word& w : enumerate_words(2, n))
      best = std::max(best, log_interval_length(data, w) / n);
    double root = std::exp(best);
    CHECK(root < 1.0);
    CHECK(root <= prev + 1e-12);
    prev = root;
  }
}

TEST_CASE("json round trip and builder path") {
  SchottkyData data = reference_schottky();
  SchottkyData back = SchottkyData::from_json(data.to_json());
  CHECK(back.d == 2);
  CHECK(back.generators[0].b == doctest::Approx(-35.0));
  // without generators the builder formula applies
  SchottkyData built = SchottkyData::from_json(
      R"({"d": 2, "discs": [{"center": -6, "radius": 1}, {"center": -2, "radius": 1},
          {"center": 6, "radius": 1}, {"center": 2, "radius": 1}]})");
  CHECK(built.generators[0].a == doctest::Approx(6.0));
  CHECK(validate_schottky(built, 1e-10).ok());
}
