#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qids/flowfeat.hpp"
#include "qids/util.hpp"

using qids::flowfeat::FeatureVector;
using qids::flowfeat::FlowRecord;
using qids::flowfeat::Stage;

namespace {

enum { kDuration = 0, kPacketRate, kByteRate, kMeanSize, kIatCv, kDar, kJitter, kPmr };

FlowRecord basic_flow() {
    FlowRecord flow;
    flow.t_first = 1.0;
    flow.t_last = 3.0;
    flow.packet_times = {1.0, 1.5, 2.0, 2.5};
    flow.bytes_fwd = 2500.0;
    flow.bytes_bwd = 1500.0;
    flow.bytes_total = 4000.0;
    flow.packets = 4;
    return flow;
}

// Random LOGGED vector for standardizer tests.
FeatureVector random_logged(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    FeatureVector fv;
    fv.stage = Stage::Logged;
    for (double& v : fv.values) v = dist(rng);
    return fv;
}

}  // namespace

TEST_CASE("extract evaluates the four rate formulas on a hand fixture") {
    const auto fv = qids::flowfeat::extract(basic_flow());
    CHECK(fv.stage == Stage::Raw);
    CHECK(fv.values[kDuration] == 2.0);
    CHECK(fv.values[kPacketRate] == 2.0);
    CHECK(fv.values[kByteRate] == 2000.0);
    CHECK(fv.values[kMeanSize] == 1000.0);
    CHECK(!fv.imputed);
}

TEST_CASE("uniform packet spacing gives zero dispersion and zero jitter") {
    const auto fv = qids::flowfeat::extract(basic_flow());
    CHECK(fv.values[kIatCv] == 0.0);
    CHECK(fv.values[kJitter] == 0.0);
}

TEST_CASE("extract computes the directional asymmetry ratio") {
    FlowRecord flow = basic_flow();
    flow.bytes_fwd = 1000.0;
    flow.bytes_bwd = 0.0;
    auto fv = qids::flowfeat::extract(flow);
    CHECK(fv.values[kDar] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fv.values[kDar] < 1.0);  // the epsilon keeps it strictly below 1

    flow.bytes_fwd = 500.0;
    flow.bytes_bwd = 500.0;
    fv = qids::flowfeat::extract(flow);
    CHECK(fv.values[kDar] == 0.0);
}

TEST_CASE("dar stays in the unit interval for arbitrary byte splits") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1e6);
    for (int trial = 0; trial < 50; ++trial) {
        FlowRecord flow = basic_flow();
        flow.bytes_fwd = dist(rng);
        flow.bytes_bwd = dist(rng);
        flow.bytes_total = flow.bytes_fwd + flow.bytes_bwd;
        const auto fv = qids::flowfeat::extract(flow);
        CHECK(fv.values[kDar] >= 0.0);
        CHECK(fv.values[kDar] <= 1.0);
    }
}

TEST_CASE("pmr peaks on a bursty flow and is at least 1") {
    // Four packets bunched in half a second of a 2-second flow.
    FlowRecord flow = basic_flow();
    flow.packet_times = {1.0, 1.0625, 1.125, 1.1875};
    const auto fv = qids::flowfeat::extract(flow, 0.5);
    // A 0.5 s window holding all 4 packets has rate 8 pkt/s vs mean 2 pkt/s.
    CHECK(fv.values[kPmr] == doctest::Approx(4.0).epsilon(1e-9));

    // Uniform flow: no window beats the mean by much, but PMR stays >= 1.
    const auto uniform = qids::flowfeat::extract(basic_flow(), 0.5);
    CHECK(uniform.values[kPmr] >= 1.0);
}

TEST_CASE("pmr is at least 1 across random flows") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> times;
        for (int i = 0; i < 12; ++i) times.push_back(dist(rng));
        std::sort(times.begin(), times.end());
        FlowRecord flow;
        flow.t_first = times.front();
        flow.t_last = times.back();
        flow.packet_times = times;
        flow.packets = times.size();
        flow.bytes_fwd = 600.0;
        flow.bytes_bwd = 600.0;
        flow.bytes_total = 1200.0;
        const auto fv = qids::flowfeat::extract(flow, 0.1);
        CHECK(fv.values[kPmr] >= 1.0);
    }
}

TEST_CASE("degenerate single-packet flow uses the documented fallbacks") {
    FlowRecord flow;
    flow.t_first = 2.0;
    flow.t_last = 2.0;
    flow.packet_times = {2.0};
    flow.bytes_fwd = 100.0;
    flow.bytes_bwd = 0.0;
    flow.bytes_total = 100.0;
    flow.packets = 1;
    const auto fv = qids::flowfeat::extract(flow);
    CHECK(fv.values[kDuration] == 0.0);
    // Rates fall back to the 1e-6 s duration floor.
    CHECK(fv.values[kPacketRate] == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(fv.values[kByteRate] == doctest::Approx(1e8).epsilon(1e-12));
    CHECK(fv.values[kMeanSize] == 100.0);
    CHECK(fv.values[kIatCv] == 0.0);   // needs >= 2 packets
    CHECK(fv.values[kJitter] == 0.0);  // needs >= 3 packets
    CHECK(fv.values[kPmr] == 1.0);     // flow shorter than one window
}

TEST_CASE("extract rejects malformed flows") {
    FlowRecord flow = basic_flow();
    flow.packets = 0;
    flow.packet_times.clear();
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow), std::invalid_argument);

    flow = basic_flow();
    flow.t_first = -1.0;
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow), std::invalid_argument);

    flow = basic_flow();
    flow.t_last = 0.5;  // before t_first
    flow.packet_times.clear();
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow), std::invalid_argument);

    flow = basic_flow();
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow, 0.0), std::invalid_argument);

    flow = basic_flow();
    flow.packet_times.pop_back();
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow), std::invalid_argument);

    flow = basic_flow();
    std::swap(flow.packet_times[0], flow.packet_times[2]);
    CHECK_THROWS_AS((void)qids::flowfeat::extract(flow), std::invalid_argument);
}

TEST_CASE("aggregate sources use precomputed dispersion columns or impute") {
    FlowRecord flow = basic_flow();
    flow.packet_times.clear();

    auto fv = qids::flowfeat::extract(flow);
    CHECK(fv.imputed);
    CHECK(fv.values[kIatCv] == 0.0);
    CHECK(fv.values[kJitter] == 0.0);
    CHECK(fv.values[kPmr] == 1.0);

    flow.pre_iat_cv = 0.8;
    flow.pre_jitter = 0.02;
    flow.pre_pmr = 3.5;
    fv = qids::flowfeat::extract(flow);
    CHECK(!fv.imputed);
    CHECK(fv.values[kIatCv] == 0.8);
    CHECK(fv.values[kJitter] == 0.02);
    CHECK(fv.values[kPmr] == 3.5);

    // Per-window byte rates take precedence for PMR: peak 5000 vs mean 2000.
    flow.window_rates = {1000.0, 5000.0, 2000.0};
    fv = qids::flowfeat::extract(flow);
    CHECK(fv.values[kPmr] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("time-shift invariance on exactly representable timestamps") {
    FlowRecord flow = basic_flow();
    const auto base = qids::flowfeat::extract(flow);

    FlowRecord shifted = flow;
    shifted.t_first += 32.0;
    shifted.t_last += 32.0;
    for (double& t : shifted.packet_times) t += 32.0;
    const auto moved = qids::flowfeat::extract(shifted);
    for (int j = 0; j < qids::flowfeat::kNumFeatures; ++j) {
        CHECK(moved.values[j] == base.values[j]);
    }
}

TEST_CASE("time-shift invariance within tolerance on arbitrary timestamps") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 3.0);
    std::vector<double> times;
    for (int i = 0; i < 10; ++i) times.push_back(dist(rng));
    std::sort(times.begin(), times.end());
    FlowRecord flow;
    flow.t_first = times.front();
    flow.t_last = times.back();
    flow.packet_times = times;
    flow.packets = times.size();
    flow.bytes_fwd = 800.0;
    flow.bytes_bwd = 300.0;
    flow.bytes_total = 1100.0;
    const auto base = qids::flowfeat::extract(flow);

    FlowRecord shifted = flow;
    shifted.t_first += 7.3;
    shifted.t_last += 7.3;
    for (double& t : shifted.packet_times) t += 7.3;
    const auto moved = qids::flowfeat::extract(shifted);
    for (int j = 0; j < qids::flowfeat::kNumFeatures; ++j) {
        CHECK(moved.values[j] == doctest::Approx(base.values[j]).epsilon(1e-9));
    }
}

TEST_CASE("log transform hits exactly the three rate features") {
    FeatureVector fv;
    fv.stage = Stage::Raw;
    fv.values = {1.5, 0.0, std::exp(1.0) - 1.0, 900.0, 0.3, 0.6, 0.01, 4.0};
    const auto logged = qids::flowfeat::log_transform(fv);
    CHECK(logged.stage == Stage::Logged);
    CHECK(logged.values[kPacketRate] == 0.0);
    CHECK(logged.values[kByteRate] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(logged.values[kPmr] == doctest::Approx(std::log1p(4.0)).epsilon(1e-15));
    // Everything else is untouched bit-exactly.
    CHECK(logged.values[kDuration] == 1.5);
    CHECK(logged.values[kMeanSize] == 900.0);
    CHECK(logged.values[kIatCv] == 0.3);
    CHECK(logged.values[kDar] == 0.6);
    CHECK(logged.values[kJitter] == 0.01);

    CHECK_THROWS_AS((void)qids::flowfeat::log_transform(logged), std::invalid_argument);
}

TEST_CASE("standardizer fit computes population statistics") {
    FeatureVector lo;
    lo.stage = Stage::Logged;
    lo.values.fill(-1.0);
    FeatureVector hi;
    hi.stage = Stage::Logged;
    hi.values.fill(+1.0);
    const auto s = qids::flowfeat::standardizer_fit({lo, hi});
    for (int j = 0; j < qids::flowfeat::kNumFeatures; ++j) {
        CHECK(s.means[j] == 0.0);
        CHECK(s.stds[j] == 1.0);  // population std over {-1, +1}
    }
}

TEST_CASE("standardizer fit rejects degenerate inputs") {
    FeatureVector fv;
    fv.stage = Stage::Logged;
    fv.values.fill(0.5);
    CHECK_THROWS_AS((void)qids::flowfeat::standardizer_fit({fv}), std::invalid_argument);
    CHECK_THROWS_AS((void)qids::flowfeat::standardizer_fit({fv, fv}),
                    qids::NumericError);

    FeatureVector raw = fv;
    raw.stage = Stage::Raw;
    FeatureVector other = fv;
    other.values.fill(-0.5);
    CHECK_THROWS_AS((void)qids::flowfeat::standardizer_fit({raw, other}),
                    std::invalid_argument);
}

TEST_CASE("standardizing the fitted mean vector gives all zeros") {
    std::mt19937_64 rng(31);
    std::vector<FeatureVector> train;
    for (int i = 0; i < 20; ++i) train.push_back(random_logged(rng));
    const auto s = qids::flowfeat::standardizer_fit(train);

    FeatureVector mean_point;
    mean_point.stage = Stage::Logged;
    mean_point.values = s.means;
    const auto z = qids::flowfeat::standardize(mean_point, s);
    CHECK(z.stage == Stage::Standardized);
    for (double v : z.values) CHECK(v == 0.0);

    CHECK_THROWS_AS((void)qids::flowfeat::standardize(z, s), std::invalid_argument);
}

TEST_CASE("standardized training set has zero mean and unit variance") {
    std::mt19937_64 rng(37);
    std::vector<FeatureVector> train;
    for (int i = 0; i < 50; ++i) train.push_back(random_logged(rng));
    const auto s = qids::flowfeat::standardizer_fit(train);

    std::vector<FeatureVector> z;
    for (const auto& fv : train) z.push_back(qids::flowfeat::standardize(fv, s));
    const double n = static_cast<double>(z.size());
    for (int j = 0; j < qids::flowfeat::kNumFeatures; ++j) {
        double mean = 0.0;
        for (const auto& fv : z) mean += fv.values[j];
        mean /= n;
        double var = 0.0;
        for (const auto& fv : z) var += (fv.values[j] - mean) * (fv.values[j] - mean);
        var /= n;
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("standardizer json round-trips") {
    std::mt19937_64 rng(41);
    std::vector<FeatureVector> train;
    for (int i = 0; i < 5; ++i) train.push_back(random_logged(rng));
    const auto s = qids::flowfeat::standardizer_fit(train);
    const auto back =
        qids::flowfeat::standardizer_from_json(qids::flowfeat::standardizer_to_json(s));
    CHECK(back.means == s.means);
    CHECK(back.stds == s.stds);
    CHECK_THROWS_AS((void)qids::flowfeat::standardizer_from_json("{}"),
                    qids::ParseError);
}

TEST_CASE("feature csv round-trips values, labels, and stage") {
    std::mt19937_64 rng(43);
    std::vector<FeatureVector> features;
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) {
        features.push_back(random_logged(rng));
        labels.push_back(i % 2 == 0 ? +1 : -1);
    }
    const std::string csv = qids::flowfeat::features_to_csv(features, labels);
    CHECK(csv.rfind("duration,packet_rate,byte_rate,mean_packet_size,iat_cv,dar,jitter,pmr,"
                    "label,stage\n",
                    0) == 0);
    const auto [back, back_labels] = qids::flowfeat::features_from_csv(csv);
    REQUIRE(back.size() == features.size());
    CHECK(back_labels == labels);
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].stage == features[i].stage);
        CHECK(back[i].values == features[i].values);
    }
    CHECK_THROWS_AS((void)qids::flowfeat::features_from_csv("bogus\n1,2\n"),
                    qids::ParseError);
    CHECK_THROWS_AS(
        (void)qids::flowfeat::features_to_csv(features, std::vector<int>{+1}),
        std::invalid_argument);
}

TEST_CASE("flow class names round-trip") {
    using qids::flowfeat::FlowClass;
    for (FlowClass c : {FlowClass::Normal, FlowClass::Blackhole, FlowClass::Flooding,
                        FlowClass::Sybil, FlowClass::Wormhole}) {
        CHECK(qids::flowfeat::flow_class_from_string(qids::flowfeat::flow_class_name(c)) == c);
    }
    CHECK_THROWS_AS((void)qids::flowfeat::flow_class_from_string("zombie"),
                    qids::ParseError);
}
