#include <doctest.h>

#include <pairstat/error.hpp>
#include <pairstat/types.hpp>

using namespace pairstat;

TEST_SUITE("types") {
  TEST_CASE("outcome index round-trips through from_index") {
    for (std::size_t i = 0; i < kOutcomeCount; ++i) {
      CHECK(DetectorOutcome::from_index(i).index() == i);
    }
    CHECK(DetectorOutcome{}.index() == 0);
    CHECK(DetectorOutcome{true, false, false}.index() == 1);
    CHECK(DetectorOutcome{false, true, false}.index() == 2);
    CHECK(DetectorOutcome{false, false, true}.index() == 3);
    CHECK(DetectorOutcome{true, true, false}.index() == 4);
    CHECK(DetectorOutcome{true, false, true}.index() == 5);
    CHECK(DetectorOutcome{false, true, true}.index() == 6);
    CHECK(DetectorOutcome{true, true, true}.index() == 7);
  }

  TEST_CASE("merged clicks never un-click") {
    const DetectorOutcome a{true, false, false};
    const DetectorOutcome h{false, false, true};
    CHECK(a.merged(h) == DetectorOutcome{true, false, true});
    CHECK(a.merged(a) == a);
  }

  TEST_CASE("probability vector validation") {
    CHECK(ProbabilityVector::initial()[0] == 1.0);
    std::array<double, 8> bad{0.5, 0.6, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(ProbabilityVector{bad}, InvalidArgument);
    std::array<double, 8> neg{1.1, -0.1, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(ProbabilityVector{neg}, InvalidArgument);
    std::array<double, 8> ok{0.25, 0.25, 0.5, 0, 0, 0, 0, 0};
    CHECK(ProbabilityVector{ok}[DetectorOutcome{false, true, false}] == 0.5);
  }

  TEST_CASE("transmissions and darks are range-checked") {
    CHECK_THROWS_AS(ChannelTransmissions(1.1, 0.1, 0.1), InvalidArgument);
    CHECK_THROWS_AS(ChannelTransmissions(0.5, -0.1, 0.1), InvalidArgument);
    CHECK_THROWS_AS(ChannelTransmissions(0.5, 0.6, 0.5), InvalidArgument);
    CHECK_NOTHROW(ChannelTransmissions(1.0, 0.5, 0.5));
    CHECK_THROWS_AS(DarkCountRates(1.0, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(DarkCountRates(0, -1e-3, 0), InvalidArgument);
    const ChannelTransmissions t(0.6, 0.2, 0.3);
    CHECK(t.scaled(0.5).eta_b() == doctest::Approx(0.15));
    CHECK_THROWS_AS(SetupModel(t, {}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(SetupModel(t, {}, 1.5), InvalidArgument);
  }
}
