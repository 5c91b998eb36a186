#include <doctest.h>

#include <cmath>
#include <numeric>

#include "credrel/error.hpp"
#include "credrel/hyperposterior.hpp"
#include "credrel/numerics.hpp"
#include "fixtures.hpp"

using namespace credrel;

namespace {

double weighted_mean_mu(const HyperGrid& g) {
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) m += g.weights[k] * g.mu_at(k);
  return m;
}

}  // namespace

TEST_SUITE("hyperposterior") {
  TEST_CASE("grid nodes and widths") {
    const HyperGrid g = build_grid({2, 3, 0.5, 8.0});
    REQUIRE(g.mu.size() == 2);
    CHECK(g.mu[0] == doctest::Approx(0.25));
    CHECK(g.mu[1] == doctest::Approx(0.75));
    CHECK(g.mu_width[0] == doctest::Approx(0.5));
    CHECK(g.size() == 6);
    double nu_total = 0.0;
    for (const double w : g.nu_width) nu_total += w;
    CHECK(nu_total == doctest::Approx(7.5));

    const HyperGrid one = build_grid({1, 1, 1.0, 4.0});
    CHECK(one.nu[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(one.mu[0] == 0.5);

    const HyperGrid def = build_grid({});
    CHECK(std::accumulate(def.mu_width.begin(), def.mu_width.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(def.nu.front() > 0.05);
    CHECK(def.nu.back() < 150.0);
  }

  TEST_CASE("log prior density closed forms") {
    CHECK(log_prior_density(0.3, 2.0, {1, 1, 1, 1}) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(log_prior_density(0.5, 1.0, {2, 2, 1, 1}) == doctest::Approx(std::log(1.5) - 1.0).epsilon(1e-13));
  }

  TEST_CASE("prior density integrates to one over the default grid") {
    // Holds when the Gamma mass lies inside [nu_min, nu_max].
    const HyperGrid g = build_grid({});
    for (const HyperConfig h : {HyperConfig{2, 2, 2, 1}, HyperConfig{5, 3, 4, 2}, HyperConfig{1, 1, 3, 1}}) {
      double mass = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) mass += std::exp(log_prior_density(g.mu_at(k), g.nu_at(k), h)) * g.cell_measure(k);
      CAPTURE(h.a);
      CHECK(std::fabs(mass - 1.0) < 0.02);
    }
  }

  TEST_CASE("marginal likelihood") {
    const std::vector<SubdomainData> none{{"S", 0, 0}};
    CHECK(log_marginal_likelihood(none, 0.5, 2.0) == 0.0);
    const std::vector<SubdomainData> one{{"S", 1, 1}};
    CHECK(log_marginal_likelihood(one, 0.5, 2.0) == doctest::Approx(std::log(0.5)).epsilon(1e-13));
    const std::vector<SubdomainData> a{{"A", 3, 10}};
    const std::vector<SubdomainData> b{{"B", 7, 9}};
    const std::vector<SubdomainData> ab{{"A", 3, 10}, {"B", 7, 9}};
    CHECK(log_marginal_likelihood(ab, 0.3, 5.0) ==
          doctest::Approx(log_marginal_likelihood(a, 0.3, 5.0) + log_marginal_likelihood(b, 0.3, 5.0)).epsilon(1e-13));
    // C(10,3) B(3 + 1.5, 7 + 3.5) / B(1.5, 3.5)
    const double expected = std::log(120.0) + ln_beta(4.5, 10.5) - ln_beta(1.5, 3.5);
    CHECK(log_marginal_likelihood(a, 0.3, 5.0) == doctest::Approx(expected).epsilon(1e-13));
  }

  TEST_CASE("no data gives weights proportional to prior cell mass") {
    DomainSpec d = fixture::single_subdomain(0, 0);
    const HyperGrid grid = build_grid({6, 5, 0.1, 20.0});
    const HyperConfig h{2, 3, 2, 1};
    const HyperGrid post = hyper_posterior(d, h, grid);
    std::vector<double> prior(grid.size());
    double total = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      prior[k] = std::exp(log_prior_density(grid.mu_at(k), grid.nu_at(k), h)) * grid.cell_measure(k);
      total += prior[k];
    }
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(post.weights[k] == doctest::Approx(prior[k] / total).epsilon(1e-12));
  }

  TEST_CASE("weights are normalized at every box corner") {
    const auto sys = fixture::table1_system();
    const HyperGrid grid = build_grid({});
    const HyperBox box;
    for (unsigned bits = 0; bits < 16; ++bits) {
      const HyperConfig h{(bits & 1U) ? box.a.hi : box.a.lo, (bits & 2U) ? box.b.hi : box.b.lo,
                          (bits & 4U) ? box.c.hi : box.c.lo, (bits & 8U) ? box.d.hi : box.d.lo};
      for (const auto& d : sys.domains) {
        const HyperGrid post = hyper_posterior(d, h, grid);
        CHECK(std::accumulate(post.weights.begin(), post.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::isfinite(post.log_evidence));
      }
    }
  }

  TEST_CASE("posterior of mu moves toward the data") {
    const DomainSpec d = fixture::single_subdomain(90, 100);
    const HyperConfig h{1, 1, 1, 1};
    const HyperGrid post = hyper_posterior(d, h, build_grid({}));
    const double m = weighted_mean_mu(post);
    CHECK(m > 0.5);
    CHECK(posterior_mean_mu(post) == doctest::Approx(m));

    // Fine reference grid with 10^6 nodes.
    const HyperGrid fine = hyper_posterior(d, h, build_grid({1000, 1000, 0.05, 150.0}));
    CHECK(std::fabs(weighted_mean_mu(fine) - m) < 0.01);
  }

  TEST_CASE("precomputed likelihood path matches the direct path") {
    const auto sys = fixture::table1_system();
    const HyperGrid grid = build_grid({12, 9, 0.05, 150.0});
    const auto ll = grid_log_likelihood(sys.domains[1].subdomains, grid);
    const HyperConfig h{3, 7, 12, 4};
    const HyperGrid a = hyper_posterior(ll, h, grid);
    const HyperGrid b = hyper_posterior(sys.domains[1], h, grid);
    CHECK(a.weights == b.weights);
    CHECK(a.log_evidence == b.log_evidence);
  }

  TEST_CASE("normalization of log weights") {
    std::vector<double> out(3);
    const double lse = normalize_log_weights(std::vector<double>{std::log(1.0), std::log(3.0), -1000.0}, out);
    CHECK(lse == doctest::Approx(std::log(4.0)));
    CHECK(out[1] == doctest::Approx(0.75));
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> out2(2);
    CHECK_THROWS_AS(normalize_log_weights(std::vector<double>{-inf, -inf}, out2), NumericalError);
  }

  TEST_CASE("point grid") {
    const HyperGrid g = point_grid(0.5, 2.0);
    CHECK(g.weighted());
    CHECK(g.size() == 1);
    CHECK_THROWS_AS(point_grid(1.0, 2.0), DomainError);
  }
}
