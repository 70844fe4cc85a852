#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "dtn/analyze.hpp"
#include "dtn/colouring.hpp"
#include "dtn/estimate.hpp"
#include "dtn/synth.hpp"
#include "dtn/trace.hpp"

using namespace dtn;

namespace {

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    REQUIRE(x.size() == y.size());
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k] / n;
        my += y[k] / n;
    }
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

ColouringRun make_run(std::vector<double> times) {
    ColouringRun r;
    r.colour_times = std::move(times);
    r.coloured_order.resize(r.colour_times.size());
    for (std::size_t k = 0; k < r.coloured_order.size(); ++k) {
        r.coloured_order[k] = static_cast<NodeId>(k);
    }
    return r;
}

// Contacts of one pair at phase + k*period for k = 0..count-1.
void periodic(std::vector<ContactEvent>& out, NodeId a, NodeId b, double phase, double period,
              std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
        const double t = phase + period * static_cast<double>(k);
        out.push_back({a, b, t, t});
    }
}

} // namespace

TEST_CASE("synchronised pairs around a node correlate perfectly; lone pairs are excluded") {
    // Pairs (0,1) and (0,2) fire at exactly the same instants, so their
    // residual series coincide. Nodes 1 and 2 touch only one pair each.
    std::vector<ContactEvent> events;
    periodic(events, 0, 1, 0.0, 1000.0, 40);
    periodic(events, 0, 2, 0.0, 1000.0, 40);
    const ContactTrace trace(std::move(events), 3);

    const auto rep = contact_correlation(trace, 20000.0, 201);
    REQUIRE(rep.node_avg.size() == 3);
    CHECK(rep.node_avg[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isnan(rep.node_avg[1]));
    CHECK(std::isnan(rep.node_avg[2]));
    CHECK(rep.excluded == std::vector<NodeId>{1, 2});
    CHECK(rep.window_start == trace.t_min());
    CHECK(rep.method == CorrMethod::pearson);
}

TEST_CASE("anti-phased pairs match an independently computed sawtooth correlation") {
    // Pair (0,2) runs half a period behind pair (0,1). With the grid step a
    // divisor of the period the residual series are exact sawtooths, so the
    // report must match a from-scratch Pearson computation.
    std::vector<ContactEvent> events;
    periodic(events, 0, 1, 0.0, 1000.0, 40);
    periodic(events, 0, 2, 500.0, 1000.0, 40);
    const ContactTrace trace(std::move(events), 3);

    const double window = 20000.0;
    const std::size_t points = 201; // step 100, ten samples per period
    std::vector<double> r1, r2;
    for (std::size_t g = 0; g < points; ++g) {
        const double t = window / static_cast<double>(points - 1) * static_cast<double>(g);
        const double o = std::fmod(t, 1000.0);
        r1.push_back(o == 0.0 ? 0.0 : 1000.0 - o);
        r2.push_back(o <= 500.0 ? 500.0 - o : 1500.0 - o);
    }
    const auto rep = contact_correlation(trace, window, points);
    CHECK(rep.node_avg[0] == doctest::Approx(pearson_oracle(r1, r2)).epsilon(1e-12));
    CHECK(rep.node_avg[0] < -0.4);
}

TEST_CASE("correlation is symmetric in pair listing and invariant under time shifts") {
    ClusterSpec spec;
    spec.n = 9;
    spec.cluster_count = 3;
    spec.horizon = 60000.0;
    spec.seed = 3;
    const ContactTrace trace = gen_clustered(spec);

    // Same contacts, listed in reverse with endpoints swapped.
    std::vector<ContactEvent> swapped(trace.events().begin(), trace.events().end());
    std::reverse(swapped.begin(), swapped.end());
    for (auto& e : swapped) std::swap(e.a, e.b);
    const ContactTrace reordered(std::move(swapped), trace.node_count(),
                                 {{trace.t_min(), trace.t_max()}});

    // Same contacts, the whole timeline pushed back.
    const double shift = 12345.5;
    std::vector<ContactEvent> moved(trace.events().begin(), trace.events().end());
    for (auto& e : moved) {
        e.start += shift;
        e.end += shift;
    }
    const ContactTrace translated(std::move(moved), trace.node_count(),
                                  {{trace.t_min() + shift, trace.t_max() + shift}});

    const auto base = contact_correlation(trace, 20000.0);
    const auto swap_rep = contact_correlation(reordered, 20000.0);
    const auto move_rep = contact_correlation(translated, 20000.0);
    REQUIRE(swap_rep.node_avg.size() == base.node_avg.size());
    REQUIRE(move_rep.node_avg.size() == base.node_avg.size());
    for (std::size_t u = 0; u < base.node_avg.size(); ++u) {
        if (std::isnan(base.node_avg[u])) {
            CHECK(std::isnan(swap_rep.node_avg[u]));
            CHECK(std::isnan(move_rep.node_avg[u]));
            continue;
        }
        CHECK(swap_rep.node_avg[u] == base.node_avg[u]);
        CHECK(move_rep.node_avg[u] == doctest::Approx(base.node_avg[u]).epsilon(1e-9));
    }
}

TEST_CASE("spearman ranks agree with pearson on synchronised pairs") {
    std::vector<ContactEvent> events;
    periodic(events, 0, 1, 0.0, 1000.0, 40);
    periodic(events, 0, 2, 0.0, 1000.0, 40);
    const ContactTrace trace(std::move(events), 3);
    const auto rep =
        contact_correlation(trace, 20000.0, 201, std::nullopt, CorrMethod::spearman);
    CHECK(rep.method == CorrMethod::spearman);
    CHECK(rep.node_avg[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(to_string(CorrMethod::spearman) == "spearman");
    CHECK(corr_method_from_string("pearson") == CorrMethod::pearson);
    CHECK_THROWS_AS(corr_method_from_string("kendall"), std::invalid_argument);
}

TEST_CASE("independent renewal traffic shows almost no node-level correlation") {
    HomogeneousSpec spec;
    spec.n = 20;
    spec.rate = 5e-4;
    spec.horizon = 50000.0;
    spec.seed = 8;
    const ContactTrace trace = gen_homogeneous(spec);
    const auto rep = contact_correlation(trace, 20000.0);

    std::size_t included = 0, above = 0;
    for (const double v : rep.node_avg) {
        if (std::isnan(v)) continue;
        ++included;
        if (v > 0.1) ++above;
    }
    REQUIRE(included >= 18);
    CHECK(static_cast<double>(above) <= 0.10 * static_cast<double>(included));
}

TEST_CASE("burst-driven clusters push most nodes above the 0.2 correlation mark") {
    const ContactTrace trace = gen_clustered(ClusterSpec{}); // synchronised bursts
    const auto rep = contact_correlation(trace, 20000.0);
    std::size_t included = 0, above = 0;
    for (const double v : rep.node_avg) {
        if (std::isnan(v)) continue;
        ++included;
        if (v > 0.2) ++above;
    }
    REQUIRE(included > 0);
    CHECK(static_cast<double>(above) >= 0.40 * static_cast<double>(included));
}

TEST_CASE("correlation inputs are validated") {
    const ContactTrace trace({{0, 1, 0.0, 1.0}}, 2);
    CHECK_THROWS_AS(contact_correlation(trace, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(contact_correlation(trace, 10.0, 1), std::invalid_argument);
}

TEST_CASE("threshold sweep of node correlations is a complementary CDF") {
    CorrelationReport rep;
    rep.node_avg = {0.3, 0.1, std::numeric_limits<double>::quiet_NaN(), 0.9};
    const auto ccdf = correlation_ccdf(rep);
    REQUIRE(ccdf.size() == 21);
    CHECK(ccdf[0] == std::pair<double, double>{0.0, 1.0});
    CHECK(ccdf[1].second == doctest::Approx(1.0));        // all three above 0.05
    CHECK(ccdf[2].second == doctest::Approx(2.0 / 3.0));  // 0.1 is not above 0.1
    CHECK(ccdf[6].second == doctest::Approx(1.0 / 3.0));  // only 0.9 above 0.3
    CHECK(ccdf[18].second == doctest::Approx(0.0));       // nothing above 0.9
    for (std::size_t k = 1; k < ccdf.size(); ++k) {
        CHECK(ccdf[k].second <= ccdf[k - 1].second);
    }
}

TEST_CASE("spread-time versus next-step correlation on constructed runs") {
    std::vector<ColouringRun> aligned, opposed, flat, few;
    for (int k = 0; k < 150; ++k) {
        const double t2 = 10.0 + k;
        aligned.push_back(make_run({0.0, t2, t2 + 2.0 * k}));
        opposed.push_back(make_run({0.0, t2, t2 + 300.0 - 2.0 * k}));
        flat.push_back(make_run({0.0, t2, t2 + 5.0}));
    }
    few.assign(aligned.begin(), aligned.begin() + 99);

    const auto up = t_delta_correlation(aligned, 2);
    CHECK(up.pairs == 150);
    CHECK(!up.degenerate);
    CHECK(up.rho == doctest::Approx(1.0).epsilon(1e-12));

    const auto down = t_delta_correlation(opposed, 2);
    CHECK(down.rho == doctest::Approx(-1.0).epsilon(1e-12));

    // A constant step has no variance; reported as 0 with the flag set.
    const auto constant = t_delta_correlation(flat, 2);
    CHECK(constant.degenerate);
    CHECK(constant.rho == 0.0);

    const auto scarce = t_delta_correlation(few, 2);
    CHECK(scarce.degenerate);
    CHECK(scarce.pairs == 99);

    CHECK_THROWS_AS(t_delta_correlation(aligned, 0), std::invalid_argument);
}

TEST_CASE("mean reach times pool runs rank by rank") {
    std::vector<ColouringRun> runs;
    runs.push_back(make_run({0.0, 5.0, 15.0}));
    runs.push_back(make_run({0.0, 7.0})); // censored after two nodes
    const auto means = mean_colour_times(runs, 3);
    REQUIRE(means.size() == 3);
    CHECK(means[0] == 0.0);
    CHECK(means[1] == doctest::Approx(6.0));
    CHECK(means[2] == doctest::Approx(15.0));

    // No run reached rank 3 of 4: the slot is NaN, not zero.
    const auto sparse = mean_colour_times(runs, 4);
    CHECK(std::isnan(sparse[3]));
}

TEST_CASE("model reach times are cumulative step means") {
    DeltaModel m;
    m.kind = ModelKind::mixture;
    m.n = 3;
    m.per_i.resize(2);
    m.per_i[0] = {0.0, 0.1, false, false};  // mean 10
    m.per_i[1] = {0.5, 0.2, false, false};  // mean (1-0.5)/0.2 = 2.5
    const auto out = model_mean_colour_times(m, 1.0, 64);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(10.0));
    CHECK(out[2] == doctest::Approx(12.5));
}

TEST_CASE("pair-alike model tracks sampled step means on mingled traffic") {
    HomogeneousSpec spec;
    spec.n = 20;
    spec.rate = 5e-4;
    spec.horizon = 50000.0;
    spec.seed = 77;
    const ContactTrace trace = gen_homogeneous(spec);

    const auto runs = sample_runs(trace, 10000, 4242);
    const DeltaSamples s = collect_deltas(runs, 20);
    const DeltaModel m = fit_homogeneous(trace);
    const auto model_means = per_i_means(m, 0.25, 8000);

    for (std::uint32_t i = 5; i <= 15; ++i) {
        const auto& v = s.per_i[i - 1];
        REQUIRE(v.size() > 1000);
        double mean = 0.0;
        for (const double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        CHECK(model_means[i - 1] == doctest::Approx(mean).epsilon(0.10));
    }
}

TEST_CASE("step sample export lists one row per observation") {
    DeltaSamples s;
    s.n = 3;
    s.runs = 2;
    s.per_i = {{1.5, 0.0}, {30.0}};
    std::ostringstream ss;
    write_delta_samples_csv(ss, s);
    CHECK(ss.str() == "i,delta_seconds\n1,1.5\n1,0\n2,30\n");
}

TEST_CASE("step CCDF export dedupes ties and skips empty steps") {
    DeltaSamples s;
    s.n = 4;
    s.runs = 4;
    s.per_i = {{0.0, 2.0, 0.0, 1.0}, {}, {3.0}};
    std::ostringstream ss;
    write_delta_ccdf_csv(ss, s);
    // Step 1 sorted {0,0,1,2}: the zero atom leaves the curve at 0.5 already.
    CHECK(ss.str() == "i,delta_seconds,ccdf\n"
                      "1,0,0.5\n1,1,0.25\n1,2,0\n"
                      "3,3,0\n");
}
