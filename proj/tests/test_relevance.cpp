#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oracles.hpp"
#include "segscore/evaluate.hpp"
#include "segscore/relevance.hpp"

using namespace segscore;
using Catch::Approx;

namespace {
constexpr double kTol = 1e-12;
const ConfusionCounts kS1{1225, 0, 5100, 3675};
}  // namespace

TEST_CASE("relevance report on the s1 fixture counts") {
    const RelevanceReport r = relevance_report(kS1);
    CHECK(r.tnr.value() == Approx(1.0).margin(kTol));
    CHECK(r.tpr.value() == Approx(0.25).margin(kTol));
    CHECK(r.fnr.value() == Approx(0.75).margin(kTol));
    CHECK(r.fpr.value() == Approx(0.0).margin(kTol));
    CHECK(r.precision.value() == Approx(1.0).margin(kTol));
    CHECK(r.f_measure.value() == Approx(0.20).margin(kTol));
    CHECK(r.f1_conventional.value() == Approx(0.40).margin(kTol));
    CHECK(r.xor_ratio.value() == Approx(0.75).margin(kTol));
    CHECK(r.accuracy.value() == Approx(0.6325).margin(kTol));
    CHECK(r.error_probability.value() == Approx(0.3675).margin(kTol));
    // direct substitution: vd = |3675-0|/(2*1225+3675+0)
    CHECK(r.volumetric_distance.value() == Approx(0.60).margin(kTol));
    CHECK(r.volumetric_similarity.value() == Approx(0.40).margin(kTol));
    CHECK(r.auc.value() == Approx(0.625).margin(kTol));
    CHECK(r.nlr.value() == Approx(0.75).margin(kTol));
    CHECK_FALSE(r.plr.is_defined());  // specificity is 1
}

TEST_CASE("relevance report on a perfect match") {
    const ConfusionCounts c{40, 0, 60, 0};
    const RelevanceReport r = relevance_report(c);
    CHECK(r.tpr.value() == 1.0);
    CHECK(r.tnr.value() == 1.0);
    CHECK(r.precision.value() == 1.0);
    CHECK(r.accuracy.value() == 1.0);
    CHECK(r.f_measure.value() == Approx(0.5).margin(kTol));  // quotient form peaks at 1/2
    CHECK(r.f1_conventional.value() == Approx(1.0).margin(kTol));
    CHECK(r.xor_ratio.value() == 0.0);
    CHECK(r.volumetric_distance.value() == 0.0);
    CHECK(r.error_probability.value() == 0.0);
    CHECK(r.nlr.value() == 0.0);
    CHECK(r.auc.value() == 1.0);
    CHECK_FALSE(r.plr.is_defined());
}

TEST_CASE("division by zero yields undefined markers, never a crash") {
    CHECK_THROWS_AS(relevance_report(ConfusionCounts{0, 0, 0, 0}), ValidationError);

    const RelevanceReport no_fg = relevance_report(ConfusionCounts{0, 0, 10, 0});
    CHECK_FALSE(no_fg.tpr.is_defined());
    CHECK_FALSE(no_fg.precision.is_defined());
    CHECK_FALSE(no_fg.xor_ratio.is_defined());
    CHECK_FALSE(no_fg.fnr.is_defined());
    CHECK_FALSE(no_fg.volumetric_distance.is_defined());
    CHECK_FALSE(no_fg.volumetric_similarity.is_defined());
    CHECK_FALSE(no_fg.f_measure.is_defined());
    CHECK(no_fg.accuracy.value() == 1.0);
    CHECK_FALSE(no_fg.tpr.reason().empty());

    const RelevanceReport no_bg = relevance_report(ConfusionCounts{10, 0, 0, 0});
    CHECK_FALSE(no_bg.tnr.is_defined());
    CHECK_FALSE(no_bg.fpr.is_defined());
    CHECK_FALSE(no_bg.plr.is_defined());
    CHECK_FALSE(no_bg.nlr.is_defined());
    CHECK_FALSE(no_bg.auc.is_defined());

    const RelevanceReport zero_spec = relevance_report(ConfusionCounts{5, 10, 0, 5});
    CHECK_FALSE(zero_spec.nlr.is_defined());
    CHECK(zero_spec.plr.is_defined());
}

TEST_CASE("rate identities hold on random counts") {
    std::mt19937 rng(101);
    std::uniform_int_distribution<std::uint64_t> dist(1, 500);
    for (int trial = 0; trial < 1000; ++trial) {
        const ConfusionCounts c{dist(rng), dist(rng), dist(rng), dist(rng)};
        const RelevanceReport r = relevance_report(c);
        CHECK(r.tpr.value() + r.fnr.value() == Approx(1.0).margin(kTol));
        CHECK(r.tnr.value() + r.fpr.value() == Approx(1.0).margin(kTol));
        CHECK(r.error_probability.value() == Approx(1.0 - r.accuracy.value()).margin(kTol));
        CHECK(r.volumetric_similarity.value() ==
              Approx(1.0 - r.volumetric_distance.value()).margin(kTol));
        CHECK(r.auc.value() ==
              Approx(1.0 - (r.fpr.value() + r.fnr.value()) / 2.0).margin(kTol));
        CHECK(r.f1_conventional.value() == Approx(2.0 * r.f_measure.value()).margin(kTol));
    }
}

TEST_CASE("adding false positives never increases precision or accuracy") {
    std::mt19937 rng(103);
    std::uniform_int_distribution<std::uint64_t> dist(1, 200);
    for (int trial = 0; trial < 200; ++trial) {
        ConfusionCounts c{dist(rng), dist(rng), dist(rng) + 50, dist(rng)};
        const RelevanceReport before = relevance_report(c);
        ConfusionCounts worse = c;  // a background pixel flips to a false positive
        worse.fp += 1;
        worse.tn -= 1;
        const RelevanceReport after = relevance_report(worse);
        CHECK(after.precision.value() <= before.precision.value() + kTol);
        CHECK(after.accuracy.value() <= before.accuracy.value() + kTol);
    }
}

TEST_CASE("vd identity") {
    SECTION("s1 fixture: both routes give 0.60") {
        CHECK(vd_identity_check(1225, 4900, kS1));
    }
    SECTION("identical masks: both sides zero") {
        CHECK(vd_identity_check(17, 17, ConfusionCounts{17, 0, 83, 0}));
    }
    SECTION("holds on 1000 random mask pairs") {
        std::mt19937 rng(107);
        for (int trial = 0; trial < 1000; ++trial) {
            const BinaryMask a = oracles::random_mask(rng, 8, 8);
            const BinaryMask g = oracles::random_mask(rng, 8, 8);
            const ConfusionCounts c = confusion_counts(a, g);
            REQUIRE(vd_identity_check(a.foreground_count(), g.foreground_count(), c));
        }
    }
}

TEST_CASE("polarity table") {
    CHECK(polarity_of("voi") == Polarity::LowerBetter);
    CHECK(polarity_of("auc") == Polarity::HigherBetter);
    CHECK(polarity_of("vs") == Polarity::HigherBetter);
    CHECK(polarity_of("bhd") == Polarity::LowerBetter);
    CHECK_FALSE(polarity_of("no_such_metric").has_value());

    SECTION("every exported metric has exactly one entry") {
        std::set<std::string_view> seen;
        for (const MetricPolarity& p : polarity_table()) CHECK(seen.insert(p.name).second);
        for (const std::string& name : metric_names()) CHECK(polarity_of(name).has_value());
        CHECK(metric_names().size() == polarity_table().size());
    }
}
