#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "xxz/liouvillian.hpp"
#include "xxz/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>

using namespace xxz;

TEST_CASE("identity is stationary") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const Operator image = apply_liouvillian(model, identity_operator(3));
    CHECK(image.mat.norm() <= 1e-13);
}

TEST_CASE("dimension mismatch is rejected") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(apply_liouvillian(model, identity_operator(2)), std::invalid_argument);
}

TEST_CASE("dissipator action on single-site raising operators") {
    const LindbladModel model = dephasing_model(4);
    for (int m = 0; m < 4; ++m) {
        const Operator sp = site_operator(SiteOp::Plus, m, 4);
        CHECK((apply_liouvillian(model, sp).mat + sp.mat).norm() <= 1e-13);
        const Operator sm = site_operator(SiteOp::Minus, m, 4);
        CHECK((apply_liouvillian(model, sm).mat + sm.mat).norm() <= 1e-13);
    }
}

TEST_CASE("dissipator action on pair correlations") {
    const LindbladModel model = dephasing_model(4);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            if (m == n) continue;
            const Operator pair = pair_hopping(m, n, 4);
            CHECK((apply_liouvillian(model, pair).mat + 2.0 * pair.mat).norm() <= 1e-13);
        }
}

TEST_CASE("non-diagonal jumps take the generic path") {
    LindbladModel generic = dephasing_model(2);
    generic.jumps.push_back(site_operator(SiteOp::X, 0, 2));

    const Operator x = testutil::random_operator(2, 99);
    const Operator image = apply_liouvillian(generic, x);

    // oracle: direct evaluation of the Lindblad form
    Matrix expected =
        Complex(0, -1) * (generic.hamiltonian.mat * x.mat - x.mat * generic.hamiltonian.mat);
    for (const Operator& l : generic.jumps) {
        const Matrix ldl = l.mat.adjoint() * l.mat;
        expected += 2.0 * l.mat * x.mat * l.mat.adjoint() - ldl * x.mat - x.mat * ldl;
    }
    CHECK((image.mat - expected).norm() <= 1e-12);
}

TEST_CASE("superoperator matches the matrix-free action") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 0.7, 1.1});
    const Matrix sop = build_superoperator(model);
    const Eigen::Index d = model.hamiltonian.dim();

    const Operator x = testutil::random_operator(3, 7);
    const Vector vec_x = Eigen::Map<const Vector>(x.mat.data(), d * d);
    const Vector lhs = sop * vec_x;
    const Operator image = apply_liouvillian(model, x);
    const Vector rhs = Eigen::Map<const Vector>(image.mat.data(), d * d);
    CHECK((lhs - rhs).norm() <= 1e-12);
}

TEST_CASE("trace functional is a left null vector") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 2.0, 1.0});
    const Matrix sop = build_superoperator(model);
    const Eigen::Index d = model.hamiltonian.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Vector vec_id = Eigen::Map<const Vector>(id.data(), d * d);
    CHECK((vec_id.adjoint() * sop).norm() <= 1e-12);
}

TEST_CASE("single-site dephasing spectrum") {
    const LindbladModel model = dephasing_model(1);
    const Matrix sop = build_superoperator(model);

    // oracle: coherences |d><u|, |u><d| damp at rate 1, populations persist;
    // under column stacking that is diag(0, -1, -1, 0)
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = -1.0;
    expected(2, 2) = -1.0;
    CHECK((sop - expected).norm() <= 1e-14);

    Eigen::ComplexEigenSolver<Matrix> es(sop);
    std::vector<double> re;
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).imag()) <= 1e-14);
        re.push_back(es.eigenvalues()(i).real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(re[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(re[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(re[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dense superoperator is capped") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(build_superoperator(model, 2), resource_error);
    const LindbladModel big = build_model(ModelParams{6, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(build_superoperator(big), resource_error);
}

TEST_CASE("sector dimensions") {
    const auto dims2 = sector_dimensions(2);
    std::multiset<Eigen::Index> sizes;
    Eigen::Index total = 0;
    for (const auto& [label, dim] : dims2) {
        sizes.insert(dim);
        total += dim;
    }
    CHECK(total == 16);
    CHECK(sizes == std::multiset<Eigen::Index>{1, 2, 1, 2, 4, 2, 1, 2, 1});

    const auto dims8 = sector_dimensions(8);
    Eigen::Index largest = 0, total8 = 0;
    for (const auto& [label, dim] : dims8) {
        largest = std::max(largest, dim);
        total8 += dim;
    }
    CHECK(largest == 4900);  // binom(8,4)^2
    CHECK(total8 == 65536);
}

TEST_CASE("block decomposition reassembles the superoperator") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.1});
    const Matrix sop = build_superoperator(model);
    const LiouvillianBlocks blocks = sector_decompose(model);
    const Eigen::Index d = model.hamiltonian.dim();

    Matrix reassembled = Matrix::Zero(d * d, d * d);
    Eigen::Index counted = 0;
    for (const SectorBlock& block : blocks.blocks) {
        const Eigen::Index nk = Eigen::Index(block.ket_states.size());
        const Eigen::Index nb = Eigen::Index(block.bra_states.size());
        counted += nk * nb;
        for (Eigen::Index bc = 0; bc < nb; ++bc)
            for (Eigen::Index ac = 0; ac < nk; ++ac)
                for (Eigen::Index br = 0; br < nb; ++br)
                    for (Eigen::Index ar = 0; ar < nk; ++ar) {
                        const Eigen::Index row =
                            block.bra_states[br] * d + block.ket_states[ar];
                        const Eigen::Index col =
                            block.bra_states[bc] * d + block.ket_states[ac];
                        reassembled(row, col) = block.mat(br * nk + ar, bc * nk + ac);
                    }
    }
    CHECK(counted == d * d);
    CHECK((reassembled - sop).norm() <= 1e-12);
}

TEST_CASE("applying the liouvillian preserves sector support") {
    const LindbladModel model = build_model(ModelParams{4, 1.0, 1.0, 1.0});
    // an operator supported on the single sector (1, 2)
    Operator x = zero_operator(4);
    const auto by_m = states_by_magnetization(4);
    for (const std::uint32_t ket : by_m[1])
        for (const std::uint32_t bra : by_m[2]) x.mat(ket, bra) = Complex(0.3, -0.1);

    const Operator image = apply_liouvillian(model, x);
    for (Eigen::Index j = 0; j < image.dim(); ++j)
        for (Eigen::Index i = 0; i < image.dim(); ++i)
            if (magnetization(std::uint32_t(i)) != 1 || magnetization(std::uint32_t(j)) != 2)
                CHECK(std::abs(image.mat(i, j)) == 0.0);
}

TEST_CASE("hermiticity covariance and trace annihilation") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 0.5, 1.1});
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Operator x = testutil::random_operator(3, seed);
        const Operator lx = apply_liouvillian(model, x);
        const Operator lxd = apply_liouvillian(model, adjoint(x));
        CHECK((lxd.mat - lx.mat.adjoint()).norm() <= 1e-12);
        CHECK(std::abs(lx.mat.trace()) <= 1e-12);
    }
}

TEST_CASE("invalid models are rejected by the sector decomposition") {
    // transverse field breaks magnetization conservation
    LindbladModel broken = dephasing_model(2);
    broken.hamiltonian = site_operator(SiteOp::X, 0, 2);
    CHECK_THROWS_AS(sector_decompose(broken), std::invalid_argument);

    // non-diagonal jumps are outside the blocking scheme
    LindbladModel rotated = dephasing_model(2);
    rotated.jumps[0] = site_operator(SiteOp::X, 0, 2);
    CHECK_THROWS_AS(sector_decompose(rotated), std::invalid_argument);
}

TEST_CASE("partial decomposition carries the requested sectors only") {
    const LindbladModel model = build_model(ModelParams{3, 1.0, 1.0, 1.0});
    const LiouvillianBlocks blocks =
        sector_decompose(model, {SectorLabel{1, 1}, SectorLabel{2, 1}});
    CHECK(blocks.blocks.size() == 2);
    CHECK(blocks.find(SectorLabel{1, 1}) != nullptr);
    CHECK(blocks.find(SectorLabel{2, 1}) != nullptr);
    CHECK(blocks.find(SectorLabel{0, 0}) == nullptr);
    CHECK(blocks.find(SectorLabel{1, 1})->mat.rows() == 9);
}
