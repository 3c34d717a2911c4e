#include <cmath>

#include <Eigen/Eigenvalues>

#include "test_util.hpp"
#include "topiclear/reduction.hpp"

using namespace topiclear;

namespace {

double column_alignment_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    // distance up to sign
    return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

TopicAssignment labels_of(std::vector<int> h, int k) {
    TopicAssignment a;
    a.h = std::move(h);
    a.k = k;
    return a;
}

// Random orthonormal d x m frame from the QR factorization of a Gaussian matrix.
Eigen::MatrixXd random_frame(Eigen::Index d, Eigen::Index m, Rng& rng) {
    Eigen::MatrixXd g(d, m);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = testing::normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(d, m);
}

}  // namespace

TEST_CASE("pca_fit on rank-1 data puts all variance in one component") {
    RowMatrix x(6, 3);
    for (int i = 0; i < 6; ++i) {
        const double t = 0.5 * i - 1.0;
        x.row(i) << 1 + t, -2 + 2 * t, 3 * t;
    }
    const EmbeddingMatrix m(x, Stage::raw);
    const auto model = pca_fit(m, 1);
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const double total = centered.squaredNorm() / 5.0;
    CHECK(model.explained_variance(0) == doctest::Approx(total).epsilon(1e-12));
    const auto coords = pca_transform(model, m);
    const RowMatrix back = pca_inverse_transform(model, coords.data());
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pca with d_out = dim reconstructs and preserves distances") {
    const RowMatrix x = testing::random_matrix(20, 5, 3);
    const EmbeddingMatrix m(x, Stage::raw);
    const auto model = pca_fit(m, 5);
    const auto y = pca_transform(model, m);
    CHECK((pca_inverse_transform(model, y.data()) - x).cwiseAbs().maxCoeff() < 1e-8);
    for (int i = 0; i < 20; ++i) {
        for (int j = i + 1; j < 20; ++j) {
            CHECK((y.data().row(i) - y.data().row(j)).norm() ==
                  doctest::Approx((x.row(i) - x.row(j)).norm()).epsilon(1e-10));
        }
    }
    const Eigen::MatrixXd gram = model.components.transpose() * model.components;
    CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pca components agree with an eigendecomposition of the sample covariance") {
    const RowMatrix x = testing::random_matrix(50, 8, 5);
    const auto model = pca_fit(EmbeddingMatrix(x, Stage::raw), 3);

    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / 49.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd oracle = eig.eigenvectors().col(7 - j);
        CHECK(column_alignment_error(model.components.col(j), oracle) < 1e-8);
        CHECK(model.explained_variance(j) == doctest::Approx(eig.eigenvalues()(7 - j)).epsilon(1e-10));
        // sign convention: largest-magnitude entry positive
        Eigen::Index arg;
        model.components.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(model.components(arg, j) > 0);
    }
    for (int j = 1; j < 3; ++j) CHECK(model.explained_variance(j) <= model.explained_variance(j - 1));
}

TEST_CASE("pca_transform: 4 points in 2-D against a hand eigendecomposition") {
    // covariance [[10, 6], [6, 10]] / 3: top eigenvalue 16/3 along (1, 1)/sqrt(2)
    RowMatrix x(4, 2);
    x << 2, 2, -2, -2, 1, -1, -1, 1;
    const EmbeddingMatrix m(x, Stage::raw);
    const auto model = pca_fit(m, 1);
    CHECK(model.explained_variance(0) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    const auto y = pca_transform(model, m);
    CHECK(y.stage() == Stage::pca_d);
    CHECK(y.data()(0, 0) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(y.data()(1, 0) == doctest::Approx(-2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(y.data()(2, 0)) < 1e-12);
    CHECK(std::abs(y.data()(3, 0)) < 1e-12);
}

TEST_CASE("pca_transform of the mean is the zero vector") {
    const RowMatrix x = testing::random_matrix(30, 6, 9);
    const auto model = pca_fit(EmbeddingMatrix(x, Stage::raw), 4);
    RowMatrix mean_row = model.mean.transpose();
    const auto y = pca_transform(model, EmbeddingMatrix(mean_row, Stage::raw));
    CHECK(y.data().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pca per-column variance equals explained_variance") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RowMatrix x = testing::random_matrix(40, 10, 100 + seed);
        const EmbeddingMatrix m(x, Stage::raw);
        const auto model = pca_fit(m, 6);
        const auto y = pca_transform(model, m).data();
        for (int j = 0; j < 6; ++j) {
            const double var = (y.col(j).array() - y.col(j).mean()).square().sum() / 39.0;
            CHECK(var == doctest::Approx(model.explained_variance(j)).epsilon(1e-6));
        }
    }
}

TEST_CASE("pca preconditions") {
    const EmbeddingMatrix one(RowMatrix::Ones(1, 3), Stage::raw);
    CHECK_THROWS_CONTAINING(pca_fit(one, 1), "at least 2 rows");
    const EmbeddingMatrix m(testing::random_matrix(5, 3, 1), Stage::raw);
    CHECK_THROWS_CONTAINING(pca_fit(m, 4), "d_out");
    const auto model = pca_fit(m, 2);
    const EmbeddingMatrix wrong(RowMatrix::Ones(2, 4), Stage::raw);
    CHECK_THROWS_CONTAINING(pca_transform(model, wrong), "dim");
}

TEST_CASE("l2_normalize") {
    RowMatrix x(2, 2);
    x << 3, 4, 0, -2;
    const auto y = l2_normalize(EmbeddingMatrix(x, Stage::pca_d));
    CHECK(y.stage() == Stage::normalized);
    CHECK(y.data()(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(y.data()(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(y.data()(1, 1) == -1.0);

    const RowMatrix r = testing::random_matrix(25, 7, 4);
    const auto once = l2_normalize(EmbeddingMatrix(r, Stage::pca_d));
    for (std::size_t n = 0; n < once.n_docs(); ++n) CHECK(std::abs(once.data().row(static_cast<Eigen::Index>(n)).norm() - 1.0) < 1e-9);
    const auto twice = l2_normalize(once);
    CHECK((twice.data() - once.data()).cwiseAbs().maxCoeff() < 1e-12);

    RowMatrix z = RowMatrix::Ones(3, 2);
    z.row(2).setZero();
    CHECK_THROWS_CONTAINING(l2_normalize(EmbeddingMatrix(z, Stage::pca_d)), "row 2");
}

TEST_CASE("two-class discriminant matches the Fisher closed form") {
    Rng rng(21);
    RowMatrix x(40, 2);
    std::vector<int> h;
    for (int i = 0; i < 40; ++i) {
        const int c = i % 2;
        x(i, 0) = (c ? 2.0 : -1.0) + testing::normal(rng);
        x(i, 1) = (c ? 1.0 : 0.5) + testing::normal(rng);
        h.push_back(c);
    }
    const EmbeddingMatrix y(x, Stage::normalized);
    const auto model = lda_fit(y, labels_of(h, 2), 0.0);
    REQUIRE(model.output_dim() == 1);

    const auto s = scatter_matrices(y, h, 2);
    Eigen::Vector2d mu0 = Eigen::Vector2d::Zero(), mu1 = Eigen::Vector2d::Zero();
    for (int i = 0; i < 40; ++i) (h[static_cast<std::size_t>(i)] ? mu1 : mu0) += x.row(i).transpose() / 20.0;
    const Eigen::Vector2d fisher = s.within.ldlt().solve(mu1 - mu0).normalized();
    CHECK(column_alignment_error(model.projection.col(0), fisher) < 1e-6);
}

TEST_CASE("discriminant has exactly K - 1 columns, even with an empty class") {
    const auto blobs = testing::make_blobs(60, 6, 4, 5.0, 1.0, 8);
    const EmbeddingMatrix y(blobs.points, Stage::normalized);
    const auto full = lda_fit(y, labels_of(blobs.labels, 4));
    CHECK(full.output_dim() == 3);
    CHECK(full.populated_classes == 4);

    auto h = blobs.labels;
    for (int& v : h) if (v == 3) v = 2;
    const auto padded = lda_fit(y, labels_of(h, 4));
    CHECK(padded.output_dim() == 3);
    CHECK(padded.populated_classes == 3);
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(padded.projection.col(j).norm() == doctest::Approx(1.0));

    std::vector<int> single(60, 1);
    CHECK_THROWS_CONTAINING(lda_fit(y, labels_of(single, 4)), "populated");
}

TEST_CASE("discriminant objective beats random orthonormal projections") {
    Rng rng(5);
    const auto blobs = testing::make_blobs(30, 5, 3, 3.0, 1.0, 77);
    const EmbeddingMatrix y(blobs.points, Stage::normalized);
    const auto model = lda_fit(y, labels_of(blobs.labels, 3));
    const auto s = scatter_matrices(y, blobs.labels, 3);
    const double best = trace_ratio(s.between, s.within, model.projection);
    CHECK(best == doctest::Approx(model.objective));
    int beaten = 0;
    for (int t = 0; t < 1000; ++t) {
        if (trace_ratio(s.between, s.within, random_frame(5, 2, rng)) > best) ++beaten;
    }
    CHECK(beaten == 0);
}

TEST_CASE("trace ratio at the kept columns dominates every discarded eigenvector") {
    Rng rng(99);
    for (int inst = 0; inst < 100; ++inst) {
        const int k = 2 + static_cast<int>(rng.below(3));
        const int d = k + 1 + static_cast<int>(rng.below(4));
        const auto blobs = testing::make_blobs(static_cast<std::size_t>(6 * k + d), static_cast<std::size_t>(d), k,
                                               1.0 + 3.0 * rng.uniform(), 1.0, rng.next());
        const EmbeddingMatrix y(blobs.points, Stage::normalized);
        const auto model = lda_fit(y, labels_of(blobs.labels, k));
        const auto s = scatter_matrices(y, blobs.labels, k);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
            s.between, s.within + model.regularization * Eigen::MatrixXd::Identity(d, d));
        const double kept = trace_ratio(s.between, s.within, model.projection);
        for (int j = 0; j < d - (k - 1); ++j) {
            const Eigen::MatrixXd w = ges.eigenvectors().col(j);
            CHECK(kept >= trace_ratio(s.between, s.within, w) - 1e-9 * std::abs(kept));
        }
    }
}

TEST_CASE("two-class direction is invariant to uniform scaling of the inputs") {
    const auto blobs = testing::make_blobs(50, 4, 2, 3.0, 1.0, 31);
    const auto a = lda_fit(EmbeddingMatrix(blobs.points, Stage::normalized), labels_of(blobs.labels, 2));
    const auto b = lda_fit(EmbeddingMatrix(blobs.points * 3.7, Stage::normalized), labels_of(blobs.labels, 2));
    CHECK(column_alignment_error(a.projection.col(0), b.projection.col(0)) < 1e-9);
}

TEST_CASE("lda_transform") {
    SUBCASE("identity projection leaves data unchanged") {
        LdaModel id;
        id.k = 4;
        id.projection = Eigen::MatrixXd::Identity(3, 3);
        const RowMatrix x = testing::random_matrix(10, 3, 2);
        const auto y = lda_transform(id, EmbeddingMatrix(x, Stage::normalized));
        CHECK(y.stage() == Stage::feature_k1);
        CHECK(y.data() == x);
    }
    SUBCASE("zero input maps to zero") {
        const auto blobs = testing::make_blobs(30, 5, 3, 4.0, 1.0, 3);
        const auto model = lda_fit(EmbeddingMatrix(blobs.points, Stage::normalized), labels_of(blobs.labels, 3));
        const auto y = lda_transform(model, EmbeddingMatrix(RowMatrix::Zero(4, 5), Stage::normalized));
        CHECK(y.data().cwiseAbs().maxCoeff() == 0.0);
        CHECK_THROWS_CONTAINING(lda_transform(model, EmbeddingMatrix(RowMatrix::Zero(4, 6), Stage::normalized)), "dim");
    }
    SUBCASE("separated blobs keep distinct class means") {
        const auto blobs = testing::make_blobs(90, 8, 3, 10.0, 1.0, 4);
        const EmbeddingMatrix in(blobs.points, Stage::normalized);
        const auto model = lda_fit(in, labels_of(blobs.labels, 3));
        const auto y = lda_transform(model, in).data();
        std::vector<Eigen::VectorXd> means(3, Eigen::VectorXd::Zero(2));
        std::vector<double> spread(3, 0.0);
        for (int i = 0; i < 90; ++i) means[static_cast<std::size_t>(blobs.labels[static_cast<std::size_t>(i)])] += y.row(i).transpose() / 30.0;
        for (int i = 0; i < 90; ++i) {
            const auto c = static_cast<std::size_t>(blobs.labels[static_cast<std::size_t>(i)]);
            spread[c] = std::max(spread[c], (y.row(i).transpose() - means[c]).norm());
        }
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = a + 1; b < 3; ++b) CHECK((means[a] - means[b]).norm() > spread[a] + spread[b]);
        }
    }
}

TEST_CASE("fits are deterministic") {
    const auto blobs = testing::make_blobs(80, 12, 4, 3.0, 1.0, 12);
    const EmbeddingMatrix y(blobs.points, Stage::normalized);
    const auto a = lda_fit(y, labels_of(blobs.labels, 4));
    const auto b = lda_fit(y, labels_of(blobs.labels, 4));
    CHECK(a.projection == b.projection);
    CHECK(pca_fit(y, 5).components == pca_fit(y, 5).components);
}
