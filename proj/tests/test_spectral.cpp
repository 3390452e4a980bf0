#include <random>

#include <gtest/gtest.h>

#include "slash/spectral.hpp"
#include "slash/synth.hpp"

using namespace slash;

namespace {

Graph path2() { return Graph{2, {{0, 1}}, false, false}; }
Graph triangle() { return Graph{3, {{0, 1}, {1, 2}, {0, 2}}, false, false}; }

Graph random_simple_graph(std::mt19937_64& rng, int max_nodes = 12) {
    std::uniform_int_distribution<int> nn(2, max_nodes);
    const int n = nn(rng);
    std::bernoulli_distribution coin(0.4);
    Graph g;
    g.num_nodes = n;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (coin(rng)) g.edges.push_back({u, v});
        }
    }
    if (g.edges.empty()) g.edges.push_back({0, 1});
    return g;
}

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = n01(rng);
    }
    return m;
}

// Edgewise oracle: sum of squared row differences over the edge list.
double edgewise_energy(const Matrix& h, const Graph& g) {
    double e = 0.0;
    for (const Edge& ed : g.edges) e += (h.row(ed.src) - h.row(ed.dst)).squaredNorm();
    return e;
}

} // namespace

TEST(LaplacianBuild, PathGraph) {
    const Laplacian lap = laplacian(path2());
    Matrix want(2, 2);
    want << 1, -1, -1, 1;
    EXPECT_TRUE(lap.matrix == want);
}

TEST(LaplacianBuild, Triangle) {
    const Laplacian lap = laplacian(triangle());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(lap.matrix(i, j), i == j ? 2.0 : -1.0);
    }
}

TEST(LaplacianBuild, EmptyGraphIsZero) {
    const Laplacian lap = laplacian(Graph{3, {}, false, false});
    EXPECT_TRUE(lap.matrix.isZero(0.0));
}

TEST(LaplacianBuild, DirectedRejected) {
    Graph g = path2();
    g.directed = true;
    EXPECT_THROW(laplacian(g), ParseError);
}

TEST(LaplacianBuild, RowSumsExactlyZero) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const Laplacian lap = laplacian(random_simple_graph(rng));
        const Vector ones = Vector::Ones(lap.matrix.rows());
        const Vector zero = lap.matrix * ones;
        for (Eigen::Index i = 0; i < zero.size(); ++i) EXPECT_EQ(zero(i), 0.0);
    }
}

TEST(DirichletEnergy, PathWorkedExample) {
    Matrix h(2, 1);
    h << 0, 1;
    EXPECT_DOUBLE_EQ(dirichlet_energy(h, laplacian(path2())), 1.0);
}

TEST(DirichletEnergy, ConstantRowsGiveZero) {
    const Matrix h = Matrix::Ones(3, 4) * 2.5;
    EXPECT_NEAR(dirichlet_energy(h, laplacian(triangle())), 0.0, 1e-12);
}

TEST(DirichletEnergy, TriangleWorkedExample) {
    Matrix h(3, 1);
    h << 0, 1, 2;
    EXPECT_DOUBLE_EQ(dirichlet_energy(h, laplacian(triangle())), 6.0);
}

TEST(DirichletEnergy, TraceFormMatchesEdgewiseOracle) {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const Graph g = random_simple_graph(rng);
        const Laplacian lap = laplacian(g);
        std::uniform_int_distribution<int> dd(1, 8);
        const Matrix h = random_matrix(rng, g.num_nodes, dd(rng));
        const double trace_form = dirichlet_energy(h, lap);
        const double oracle = edgewise_energy(h, g);
        EXPECT_NEAR(trace_form, oracle, 1e-10 * std::max(1.0, oracle));
    }
}

TEST(DirichletEnergy, DimensionMismatch) {
    EXPECT_THROW(dirichlet_energy(Matrix::Zero(5, 2), laplacian(triangle())), DimensionError);
}

TEST(MixWithSink, ConvexCombinationWorkedExample) {
    Matrix topo(2, 1);
    topo << 2, 4;
    Vector v0 = Vector::Zero(1);
    const NodeRepresentation rep = mix_with_sink(topo, v0, 0.5);
    EXPECT_DOUBLE_EQ(rep.h(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(rep.h(1, 0), 2.0);
}

TEST(MixWithSink, LambdaZeroKeepsTopo) {
    std::mt19937_64 rng(109);
    const Matrix topo = random_matrix(rng, 5, 3);
    const NodeRepresentation rep = mix_with_sink(topo, Vector::Ones(3), 0.0);
    EXPECT_TRUE(rep.h == topo);
}

TEST(MixWithSink, NearOneApproachesSinkRow) {
    std::mt19937_64 rng(113);
    const Matrix topo = random_matrix(rng, 6, 3);
    const Vector v0 = Vector::Ones(3) * 0.5;
    const NodeRepresentation rep = mix_with_sink(topo, v0, 0.999);
    double max_base = 0.0;
    for (int i = 0; i < 6; ++i) max_base = std::max(max_base, (topo.row(i) - v0.transpose()).norm());
    for (int i = 0; i < 6; ++i) {
        EXPECT_LE((rep.h.row(i) - v0.transpose()).norm(), 0.001 * max_base + 1e-12);
    }
}

TEST(MixWithSink, InvariantHoldsByConstruction) {
    std::mt19937_64 rng(127);
    const Matrix topo = random_matrix(rng, 7, 4);
    const Vector v0 = random_matrix(rng, 4, 1).col(0);
    const NodeRepresentation rep = mix_with_sink(topo, v0, 0.37);
    const Matrix rebuilt = rep.lambda * Vector::Ones(7) * rep.v0.transpose() + (1.0 - rep.lambda) * rep.h_topo;
    EXPECT_LE((rep.h - rebuilt).norm(), 1e-12);
}

TEST(MixWithSink, LambdaOutOfRange) {
    EXPECT_THROW(mix_with_sink(Matrix::Zero(2, 2), Vector::Zero(2), 1.0), BoundsError);
    EXPECT_THROW(mix_with_sink(Matrix::Zero(2, 2), Vector::Zero(2), -0.1), BoundsError);
}

TEST(VerifyContraction, ExactEqualityUnderUniformLambda) {
    std::mt19937_64 rng(131);
    for (double lambda : {0.0, 0.25, 0.5, 0.9}) {
        const Matrix topo = random_matrix(rng, 6, 4);
        const Vector v0 = random_matrix(rng, 4, 1).col(0);
        const NodeRepresentation rep = mix_with_sink(topo, v0, lambda);
        const ContractionCheck c = verify_contraction(rep, 1, 4);
        EXPECT_NEAR(c.lhs, c.rhs, 1e-12 * std::max(1.0, c.rhs));
        EXPECT_NEAR(c.ratio, 1.0, 1e-12);
    }
}

TEST(VerifyContraction, WorkedHalfLambda) {
    Matrix topo(2, 1);
    topo << 0, 2; // distance 2
    const NodeRepresentation rep = mix_with_sink(topo, Vector::Zero(1), 0.5);
    const ContractionCheck c = verify_contraction(rep, 0, 1);
    EXPECT_DOUBLE_EQ(c.lhs, 1.0);
}

TEST(VerifyContraction, IdenticalRowsBothSidesZero) {
    Matrix topo = Matrix::Ones(3, 2);
    const NodeRepresentation rep = mix_with_sink(topo, Vector::Zero(2), 0.4);
    const ContractionCheck c = verify_contraction(rep, 0, 2);
    EXPECT_DOUBLE_EQ(c.lhs, 0.0);
    EXPECT_DOUBLE_EQ(c.rhs, 0.0);
    EXPECT_DOUBLE_EQ(c.ratio, 1.0);
}

TEST(VerifyContraction, PerturbedLambdaDeviationIsFirstOrder) {
    std::mt19937_64 rng(137);
    const double lambda = 0.5, delta = 1e-3;
    const Matrix topo = random_matrix(rng, 4, 3);
    const Vector v0 = random_matrix(rng, 3, 1).col(0);
    std::uniform_real_distribution<double> jitter(-delta, delta);
    Matrix h(4, 3);
    for (int i = 0; i < 4; ++i) {
        const double li = lambda + jitter(rng);
        h.row(i) = li * v0.transpose() + (1.0 - li) * topo.row(i);
    }
    const double lhs = (h.row(0) - h.row(2)).norm();
    const double rhs = (1.0 - lambda) * (topo.row(0) - topo.row(2)).norm();
    const double scale = v0.norm() + topo.row(0).norm() + topo.row(2).norm();
    EXPECT_LE(std::abs(lhs - rhs), 10.0 * delta * scale);
}

TEST(VerifyExpansion, RatioMatchesPrediction) {
    std::mt19937_64 rng(139);
    const Matrix topo = random_matrix(rng, 5, 3);
    const Vector v0 = random_matrix(rng, 3, 1).col(0);
    const NodeRepresentation rep = mix_with_sink(topo, v0, 0.5);
    const ExpansionCheck half = verify_expansion(rep, 0.5, 0, 3);
    EXPECT_DOUBLE_EQ(half.predicted_rho, 1.5);
    EXPECT_NEAR(half.observed_ratio, 1.5, 1e-10);
    const ExpansionCheck identity = verify_expansion(rep, 1.0, 0, 3);
    EXPECT_NEAR(identity.observed_ratio, 1.0, 1e-12);
    const ExpansionCheck hard = verify_expansion(rep, 0.0, 0, 3);
    EXPECT_NEAR(hard.observed_ratio, 2.0, 1e-10);
}

TEST(VerifyExpansion, IndependentOfSinkVector) {
    std::mt19937_64 rng(149);
    const Matrix topo = random_matrix(rng, 5, 3);
    const NodeRepresentation a = mix_with_sink(topo, random_matrix(rng, 3, 1).col(0), 0.6);
    const NodeRepresentation b = mix_with_sink(topo, random_matrix(rng, 3, 1).col(0) * 7.0, 0.6);
    const double ra = verify_expansion(a, 0.3, 1, 4).observed_ratio;
    const double rb = verify_expansion(b, 0.3, 1, 4).observed_ratio;
    EXPECT_NEAR(ra, rb, 1e-10);
}

TEST(VerifyExpansion, ZeroBaseDistanceRejected) {
    const NodeRepresentation rep = mix_with_sink(Matrix::Ones(3, 2), Vector::Zero(2), 0.5);
    EXPECT_THROW(verify_expansion(rep, 0.5, 0, 1), DegenerateError);
}

TEST(VerifyEnergyDecay, QuadraticFactor) {
    std::mt19937_64 rng(151);
    const Graph g = random_simple_graph(rng, 8);
    const Laplacian lap = laplacian(g);
    for (double lambda : {0.0, 0.5, 0.8}) {
        const Matrix topo = random_matrix(rng, g.num_nodes, 4);
        const NodeRepresentation rep = mix_with_sink(topo, random_matrix(rng, 4, 1).col(0), lambda);
        const EnergyDecayCheck c = verify_energy_decay(rep, lap);
        ASSERT_TRUE(c.factor.has_value());
        EXPECT_NEAR(*c.factor, (1.0 - lambda) * (1.0 - lambda), 1e-10 * std::max(1.0, *c.factor));
    }
}

TEST(VerifyEnergyDecay, ConstantTopoReportedUndefined) {
    const Laplacian lap = laplacian(triangle());
    const NodeRepresentation rep = mix_with_sink(Matrix::Ones(3, 2), Vector::Zero(2), 0.5);
    const EnergyDecayCheck c = verify_energy_decay(rep, lap);
    EXPECT_FALSE(c.factor.has_value());
    EXPECT_NEAR(c.e_mixed, 0.0, 1e-12);
    EXPECT_NEAR(c.e_topo, 0.0, 1e-12);
}

TEST(VerifyEnergyDecay, FactorIndependentOfSinkVector) {
    std::mt19937_64 rng(157);
    const Graph g = random_simple_graph(rng, 8);
    const Laplacian lap = laplacian(g);
    const Matrix topo = random_matrix(rng, g.num_nodes, 3);
    const NodeRepresentation a = mix_with_sink(topo, random_matrix(rng, 3, 1).col(0), 0.4);
    const NodeRepresentation b = mix_with_sink(topo, random_matrix(rng, 3, 1).col(0) * -3.0, 0.4);
    const EnergyDecayCheck ca = verify_energy_decay(a, lap);
    const EnergyDecayCheck cb = verify_energy_decay(b, lap);
    ASSERT_TRUE(ca.factor && cb.factor);
    EXPECT_NEAR(*ca.factor, *cb.factor, 1e-10);
}

TEST(VerifySpectralAmplification, SquaredRatio) {
    std::mt19937_64 rng(163);
    const Graph g = random_simple_graph(rng, 8);
    const Laplacian lap = laplacian(g);
    const Matrix topo = random_matrix(rng, g.num_nodes, 4);

    const NodeRepresentation rep = mix_with_sink(topo, random_matrix(rng, 4, 1).col(0), 0.5);
    const SpectralAmplificationCheck c = verify_spectral_amplification(rep, lap, 0.5);
    const double e_mixed = dirichlet_energy(rep.h, lap);
    EXPECT_NEAR(c.e_sharpened, 2.25 * e_mixed, 1e-10 * std::max(1.0, c.e_sharpened));
    EXPECT_NEAR(c.e_sharpened, c.predicted, 1e-10 * std::max(1.0, c.predicted));

    const SpectralAmplificationCheck identity = verify_spectral_amplification(rep, lap, 1.0);
    EXPECT_NEAR(identity.e_sharpened, e_mixed, 1e-10 * std::max(1.0, e_mixed));

    const NodeRepresentation strong = mix_with_sink(topo, random_matrix(rng, 4, 1).col(0), 0.8);
    const SpectralAmplificationCheck hard = verify_spectral_amplification(strong, lap, 0.0);
    const double base = dirichlet_energy(strong.h, lap);
    EXPECT_NEAR(hard.e_sharpened, 25.0 * base, 1e-9 * std::max(1.0, hard.e_sharpened));
}

TEST(ImplicitGatStep, ExactRegimeHasZeroResidual) {
    const TokenizedSerialization s = serialize(Graph{4, {{0, 1}, {0, 3}}, false, false});
    const TokenAdjacency adj = build_token_adjacency(s);
    const int n = adj.n;
    // All mass on sink and strictly-preceding same-source neighbors.
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        std::vector<int> allowed;
        for (int j = 1; j < i; ++j) {
            if (adj.mask(i, j)) allowed.push_back(j);
        }
        a(i, 0) = allowed.empty() ? 1.0 : 0.5;
        for (int j : allowed) a(i, j) = 0.5 / static_cast<double>(allowed.size());
    }
    std::mt19937_64 rng(167);
    const Matrix values = random_matrix(rng, n, 3);
    const GatStep step = implicit_gat_step(a, adj, values);
    EXPECT_NEAR(step.residual_norm, 0.0, 1e-12);
}

TEST(ImplicitGatStep, ResidualBoundedByNoiseMass) {
    const TokenizedSerialization s = serialize(Graph{4, {{0, 1}, {2, 3}}, false, false});
    const TokenAdjacency adj = build_token_adjacency(s);
    const int n = adj.n;
    std::mt19937_64 rng(173);
    Matrix a = Matrix::Zero(n, n);
    a(0, 0) = 1.0;
    const double noise_mass = 0.1;
    for (int i = 1; i < n; ++i) {
        std::vector<int> in, out;
        for (int j = 1; j < i; ++j) (adj.mask(i, j) ? in : out).push_back(j);
        double main_share = out.empty() ? 1.0 : 1.0 - noise_mass;
        a(i, 0) = 0.5 * main_share;
        for (int j : in) a(i, j) += 0.5 * main_share / static_cast<double>(in.size() + (in.empty() ? 1 : 0));
        if (in.empty()) a(i, 0) += 0.5 * main_share;
        for (int j : out) a(i, j) = noise_mass / static_cast<double>(out.size());
    }
    Matrix values = random_matrix(rng, n, 3);
    for (int i = 0; i < n; ++i) values.row(i) /= values.row(i).norm(); // unit rows
    const GatStep step = implicit_gat_step(a, adj, values);
    EXPECT_GT(step.residual_norm, 0.0);
    // Triangle inequality: residual row norm <= noise mass * max value norm = 0.1.
    double min_full = 1e300;
    for (int i = 0; i < n; ++i) min_full = std::min(min_full, step.h_full.row(i).norm());
    EXPECT_LE(step.residual_norm, noise_mass / min_full + 1e-12);
}

TEST(ImplicitGatStep, ZeroValuesGiveZeroResidual) {
    const TokenizedSerialization s = serialize(Graph{2, {{0, 1}}, false, false});
    const TokenAdjacency adj = build_token_adjacency(s);
    std::mt19937_64 rng(179);
    Matrix a = Matrix::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j <= i; ++j) a(i, j) = 1.0 / (i + 1);
    }
    const GatStep step = implicit_gat_step(a, adj, Matrix::Zero(5, 3));
    EXPECT_DOUBLE_EQ(step.residual_norm, 0.0);
}

TEST(SourceRepresentatives, FirstNodeTokenPerSourceBlock) {
    const TokenizedSerialization s = serialize(aggregate_edges(Graph{4, {{0, 1}, {2, 3}, {0, 3}}, false, false}));
    const auto reps = source_representatives(s);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0], std::make_pair(0, 1)); // "0" of "(0,1)"
    EXPECT_EQ(reps[1], std::make_pair(2, 11)); // "2" of "(2,3)" after the two 0-sourced edges
}
