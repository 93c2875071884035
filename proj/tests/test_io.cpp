#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "robinrad/io.hpp"

using namespace robinrad;
using namespace robinrad::io;

TEST(FormatDouble, ShortestRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> E(-300.0, 300.0);
    for (int k = 0; k < 1000; ++k) {
        const double v = std::pow(10.0, E(rng)) * (k % 2 ? -1.0 : 1.0);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(kInfiniteGamma), "inf");
    EXPECT_EQ(format_double(-kInfiniteGamma), "-inf");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Number, NonFiniteAsStrings) {
    EXPECT_TRUE(number(1.5).is_number());
    EXPECT_EQ(number(kInfiniteGamma), "inf");
    EXPECT_EQ(read_number(number(kInfiniteGamma)), kInfiniteGamma);
    EXPECT_EQ(read_number(number(-kInfiniteGamma)), -kInfiniteGamma);
    EXPECT_TRUE(std::isnan(read_number(number(std::nan("")))));
    EXPECT_EQ(read_number(json(2.25)), 2.25);
    EXPECT_THROW(read_number(json("zero")), InvalidArgument);
}

TEST(MeshJson, RoundTrip) {
    const auto m = build_mesh(37, 1.7, 0.8);
    const auto back = mesh_from_json(json::parse(mesh_to_json(m).dump()));
    ASSERT_EQ(back.nodes().size(), m.nodes().size());
    for (std::size_t i = 0; i < m.nodes().size(); ++i) EXPECT_EQ(back[i], m[i]);
}

TEST(EigenJson, KeysAndValues) {
    const auto m = build_mesh(128);
    const auto r = robin_eigenvalue(RadialWeight::hardy(), Dimension(4), 0.5, m);
    const auto j = json::parse(sample_to_json(r, m).dump());
    EXPECT_EQ(j.at("lambda").get<double>(), r.lambda);
    EXPECT_EQ(j.at("gamma").get<double>(), 0.5);
    EXPECT_EQ(j.at("lambda_prime").get<double>(), r.lambda_prime);
    EXPECT_EQ(j.at("trace").get<double>(), r.trace_value);
    EXPECT_EQ(j.at("n").get<std::size_t>(), 128u);
    const auto d = dirichlet_eigenvalue(RadialWeight::hardy(), Dimension(4), m);
    EXPECT_EQ(read_number(sample_to_json(d, m).at("gamma")), kInfiniteGamma);
}

TEST(SweepCsv, HeaderAndRows) {
    const auto m = build_mesh(64);
    const std::vector<double> g = {0.1, 0.5, kInfiniteGamma};
    const auto sw = gamma_sweep(RadialWeight::hardy(), Dimension(4), g, m);
    std::ostringstream os;
    write_sweep_csv(os, sw);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "gamma,lambda,lambda_prime,trace,gap");
    int rows = 0;
    while (std::getline(is, line)) {
        const double gamma = std::stod(line.substr(0, line.find(',')));
        EXPECT_EQ(gamma, g[rows]);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    const auto j = json::parse(sweep_to_json(sw, m).dump());
    EXPECT_EQ(j.at("samples").size(), 3u);
    EXPECT_TRUE(j.at("monotone").get<bool>());
}

TEST(BvpJson, RoundTripSamples) {
    const auto m = build_mesh(64);
    const auto s = solve_bvp(RadialWeight::constant(1.0), Dimension(3), 1.0, 1.0, 1.0, m);
    const auto j = json::parse(bvp_to_json(s).dump());
    EXPECT_EQ(j.at("log_amplitude").get<double>(), s.log_amplitude);
    ASSERT_EQ(j.at("samples").size(), s.u_samples.size());
    for (std::size_t i = 0; i < s.u_samples.size(); ++i) {
        EXPECT_EQ(j["samples"][i][0].get<double>(), s.u_samples[i].first);
        EXPECT_EQ(j["samples"][i][1].get<double>(), s.u_samples[i].second);
    }
    std::ostringstream os;
    write_profile_csv(os, s);
    EXPECT_EQ(os.str().rfind("r,u,v\n", 0), 0u);
}
