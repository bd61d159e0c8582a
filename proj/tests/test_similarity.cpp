#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "t3/textmetrics/similarity.hpp"

using namespace t3::textmetrics;

TEST_CASE("cosine_similarity basics under unit weights") {
  CHECK(cosine_similarity("the cat sat", "the cat sat") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity("Sat the CAT!", "the cat sat") == doctest::Approx(1.0));
  CHECK(cosine_similarity("dog", "cat") == 0.0);
  CHECK(cosine_similarity("", "cat") == 0.0);
  CHECK(cosine_similarity("cat", "") == 0.0);

  // One shared token out of an 8-token document: 1/sqrt(8).
  double got = cosine_similarity("alpha", "alpha beta gamma delta epsilon zeta eta theta");
  CHECK(got == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("cosine_similarity stays within [0, 1]") {
  CHECK(cosine_similarity("a a a b", "a b b b") <= 1.0);
  CHECK(cosine_similarity("a a a b", "a b b b") >= 0.0);
}

TEST_CASE("build_idf implements smooth inverse document frequency") {
  IdfWeights idf = build_idf({"x common", "y common", "z common"});
  // df(common) = 3 of N = 3: ln(4/4) + 1.
  CHECK(idf.at("common") == doctest::Approx(1.0).epsilon(1e-12));
  // df(x) = 1: ln(4/2) + 1.
  CHECK(idf.at("x") == doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
  // Unseen tokens: ln(1 + N) + 1.
  CHECK(idf.at("never") == doctest::Approx(std::log(4.0) + 1.0).epsilon(1e-12));
  CHECK(idf.fallback == doctest::Approx(std::log(4.0) + 1.0).epsilon(1e-12));

  // Repetition inside one document must not inflate document frequency.
  IdfWeights rep = build_idf({"spam spam spam", "ham"});
  CHECK(rep.at("spam") == doctest::Approx(std::log(3.0 / 2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("idf weighting discounts shared common tokens") {
  IdfWeights idf = build_idf({"x common", "y common", "z common"});
  double weighted = cosine_similarity("x common", "y common", idf);
  double unweighted = cosine_similarity("x common", "y common");
  CHECK(unweighted == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(weighted < unweighted);

  // Hand value: shared "common" has weight 1, the rare tokens ln2+1.
  double w = std::log(2.0) + 1.0;
  CHECK(weighted == doctest::Approx(1.0 / (w * w + 1.0)).epsilon(1e-12));
}

TEST_CASE("identity similarity is 1 regardless of weights") {
  IdfWeights idf = build_idf({"a b c", "c d e"});
  CHECK(cosine_similarity("a b c d", "a b c d", idf) == doctest::Approx(1.0).epsilon(1e-12));
}
