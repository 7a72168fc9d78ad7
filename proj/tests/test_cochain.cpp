#include <gtest/gtest.h>

#include <cmath>

#include "boundcoh/cochain.hpp"
#include "boundcoh/sampling.hpp"
#include "boundcoh/volume.hpp"

using namespace boundcoh;

namespace {

using Point = RealBoundaryPoint;
using Tup = std::vector<Point>;

// A non-symmetric smooth cochain: each slot gets its own weight vector and
// there is a coupling term between consecutive slots.
Cochain<Point> random_cochain(std::size_t arity, Rng& rng)
{
    std::vector<Eigen::Vector3d> w(arity);
    for (auto& v : w) v = Eigen::Vector3d(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    const double c = standard_normal(rng);
    return Cochain<Point>(arity, [w, c](std::span<const Point> p) {
        double s = c;
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += std::sin(w[i].dot(p[i].direction()) + static_cast<double>(i));
            if (i + 1 < p.size()) s += 0.3 * p[i].direction().dot(p[i + 1].direction()) * (1.0 + i);
        }
        return s;
    });
}

Tup random_tuple(std::size_t size, Rng& rng)
{
    Tup t;
    for (std::size_t i = 0; i < size; ++i) t.push_back(Point::random(3, rng));
    return t;
}

Cochain<Point> vol3_cochain()
{
    return Cochain<Point>(
        4, [](std::span<const Point> p) { return vol3(p[0], p[1], p[2], p[3]); }, Alternation::declared, "S2");
}

using MCochain = ModelCochain<HyperbolicPoint, Point>;

// Radial-basis combination of pairwise hyperbolic distances between the
// model points and the boundary-triple barycenter.
MCochain rbf_cochain(std::size_t model_arity, Rng& rng)
{
    std::vector<double> w(model_arity * model_arity + model_arity);
    for (auto& x : w) x = standard_normal(rng);
    return MCochain(model_arity, 3, [w, model_arity](std::span<const HyperbolicPoint> m, std::span<const Point> b) {
        const HyperbolicPoint c = barycenter_ideal_triangle(b[0], b[1], b[2]);
        double s = 0.0;
        for (std::size_t i = 0; i < model_arity; ++i) {
            for (std::size_t j = i + 1; j < model_arity; ++j) {
                const double d = hyperbolic_distance(m[i], m[j]);
                s += w[i * model_arity + j] * std::exp(-d * d) + w[j * model_arity + i] * d;
            }
            s += w[model_arity * model_arity + i] * std::exp(-hyperbolic_distance(m[i], c));
        }
        return s;
    });
}

HyperbolicPoint random_model_point(Eigen::Index n, Rng& rng)
{
    Eigen::VectorXd v(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = standard_normal(rng);
    v(n) = std::sqrt(1.0 + v.head(n).squaredNorm());
    return HyperbolicPoint(v);
}

} // namespace

TEST(Coboundary, ConstantArityOne)
{
    const Cochain<Point> f(1, [](std::span<const Point>) { return 4.2; });
    const auto df = coboundary(f);
    EXPECT_EQ(df.arity(), 2u);
    Rng rng = substream(61, 0);
    EXPECT_EQ(df(random_tuple(2, rng)), 0.0);
}

TEST(Coboundary, CoordinateFunction)
{
    const Cochain<Point> f(1, [](std::span<const Point> p) { return p[0].direction()(0); });
    Rng rng = substream(62, 0);
    const Tup t = random_tuple(2, rng);
    EXPECT_DOUBLE_EQ(coboundary(f)(t), t[1].direction()(0) - t[0].direction()(0));
}

TEST(Coboundary, SquareVanishes)
{
    Rng rng = substream(63, 0);
    for (std::size_t arity = 1; arity <= 3; ++arity) {
        const auto f = random_cochain(arity, rng);
        const auto ddf = coboundary(coboundary(f));
        EXPECT_EQ(ddf.arity(), arity + 2);
        for (int i = 0; i < 1000; ++i) EXPECT_LE(std::abs(ddf(random_tuple(arity + 2, rng))), 1e-10);
    }
}

TEST(Coboundary, WrongArityThrows)
{
    Rng rng = substream(64, 0);
    EXPECT_THROW(random_cochain(2, rng)(random_tuple(3, rng)), InvalidArgument);
}

TEST(Alternation, SingleSlotFunction)
{
    const Cochain<Point> f(2, [](std::span<const Point> p) { return std::exp(p[0].direction()(1)); });
    const auto alt = alternate(f);
    Rng rng = substream(65, 0);
    const Tup t = random_tuple(2, rng);
    EXPECT_NEAR(alt(t), std::exp(t[0].direction()(1)) - std::exp(t[1].direction()(1)), 1e-15);
    EXPECT_EQ(alt.alternation(), Alternation::declared);
}

TEST(Alternation, SymmetricFunctionVanishes)
{
    const Cochain<Point> f(3, [](std::span<const Point> p) {
        return p[0].direction().dot(p[1].direction()) + p[1].direction().dot(p[2].direction()) +
               p[0].direction().dot(p[2].direction());
    });
    Rng rng = substream(66, 0);
    for (int i = 0; i < 100; ++i) EXPECT_NEAR(alternate(f)(random_tuple(3, rng)), 0.0, 1e-14);
}

TEST(Alternation, DoubleAlternationAndProjection)
{
    Rng rng = substream(67, 0);
    const auto f = random_cochain(3, rng);
    const auto alt = alternate(f);
    const auto alt2 = alternate(alt);
    const auto proj = alternating_part(f);
    const auto proj2 = alternating_part(proj);
    const auto rest = f - proj;
    for (int i = 0; i < 1000; ++i) {
        const Tup t = random_tuple(3, rng);
        const double a = alt(t);
        EXPECT_NEAR(alt2(t), 6.0 * a, 1e-10);
        EXPECT_NEAR(proj2(t), proj(t), 1e-10);
        EXPECT_NEAR(alternate(rest)(t), 0.0, 1e-10);
        if (i < 50) {
            EXPECT_LE(alternation_residual(alt, t), 1e-10);
        }
    }
}

TEST(Alternation, FixesDeclaredAlternatingCochain)
{
    const auto v = vol3_cochain();
    const auto proj = alternating_part(v);
    Rng rng = substream(68, 0);
    for (int i = 0; i < 100; ++i) {
        const Tup t = random_tuple(4, rng);
        EXPECT_NEAR(proj(t), v(t), 1e-10);
        EXPECT_LE(alternation_residual(v, t), 1e-10);
    }
}

TEST(Alternation, ArityGuard)
{
    Rng rng = substream(69, 0);
    EXPECT_NO_THROW(alternate(random_cochain(6, rng)));
    EXPECT_THROW(alternate(random_cochain(7, rng)), ArityTooLarge);
}

TEST(ConeHomotopy, IdentityForRandomCochains)
{
    Rng rng = substream(70, 0);
    for (std::size_t p : {1u, 2u, 3u}) {
        const MCochain f = rbf_cochain(p + 1, rng);
        const MCochain lhs1 = cone_homotopy(model_coboundary(f));
        const MCochain lhs2 = model_coboundary(cone_homotopy(f));
        EXPECT_EQ(lhs1.model_arity(), p + 1);
        EXPECT_EQ(lhs2.model_arity(), p + 1);
        for (int i = 0; i < 100; ++i) {
            std::vector<HyperbolicPoint> m;
            for (std::size_t k = 0; k <= p; ++k) m.push_back(random_model_point(3, rng));
            const Tup b = random_tuple(3, rng);
            EXPECT_LE(std::abs(f(m, b) - (lhs1(m, b) + lhs2(m, b))), 1e-12) << "p = " << p;
        }
    }
}

TEST(ConeHomotopy, ConstantInModelSlots)
{
    const MCochain f(1, 3, [](std::span<const HyperbolicPoint>, std::span<const Point> b) {
        return b[0].direction()(0) + 2.0;
    });
    Rng rng = substream(71, 0);
    const Tup b = random_tuple(3, rng);
    const std::vector<HyperbolicPoint> m{random_model_point(3, rng)};
    // d f vanishes, so H(df) = 0 and d(Hf) = Hf = f.
    EXPECT_EQ(cone_homotopy(model_coboundary(f))(m, b), 0.0);
    EXPECT_EQ(model_coboundary(cone_homotopy(f))(m, b), f(m, b));
}

TEST(ConeHomotopy, PreservesEquivariance)
{
    Rng rng = substream(72, 0);
    const MCochain f = rbf_cochain(3, rng);
    const MCochain h = cone_homotopy(f);
    for (int i = 0; i < 50; ++i) {
        std::vector<HyperbolicPoint> m{random_model_point(3, rng), random_model_point(3, rng)};
        const Tup b = random_tuple(3, rng);
        const auto g = random_lorentz(3, rng);
        std::vector<HyperbolicPoint> gm{apply(g, m[0]), apply(g, m[1])};
        const Tup gb{apply(g, b[0]), apply(g, b[1]), apply(g, b[2])};
        EXPECT_NEAR(h(gm, gb), h(m, b), 1e-9);
    }
}

TEST(ConeHomotopy, Errors)
{
    Rng rng = substream(73, 0);
    const MCochain f = rbf_cochain(2, rng);
    const auto p = Point::random(3, rng);
    const std::vector<HyperbolicPoint> m{random_model_point(3, rng)};
    EXPECT_THROW(cone_homotopy(f)(m, Tup{p, p, Point::random(3, rng)}), DegenerateTuple);
    EXPECT_THROW(cone_homotopy(MCochain(0, 3, [](auto, auto) { return 0.0; })), InvalidArgument);
    EXPECT_THROW(cone_homotopy(MCochain(1, 2, [](auto, auto) { return 0.0; })), InvalidArgument);
}

TEST(EmpiricalDefect, VolumeCocycle)
{
    const auto rep = empirical_sup_defect(vol3_cochain(), real_boundary_sampler(3, 1e-9), 1000, 2024);
    EXPECT_EQ(rep.samples, 1000u);
    EXPECT_GE(rep.draws, 1000u);
    EXPECT_LE(rep.sup_abs, 1e-7);
    EXPECT_EQ(rep.argmax_tuple.size(), 5u);
    EXPECT_EQ(rep.seed, 2024u);
    // The witness reproduces the reported value.
    EXPECT_EQ(std::abs(coboundary(vol3_cochain())(rep.argmax_tuple)), rep.sup_abs);
}

TEST(EmpiricalDefect, CoboundaryOfBoundedFunction)
{
    Rng rng = substream(74, 0);
    const auto g = random_cochain(2, rng);
    const auto rep = empirical_sup_defect(coboundary(g), real_boundary_sampler(3, 1e-9), 1000, 5);
    EXPECT_LE(rep.sup_abs, 1e-10);
}

TEST(EmpiricalDefect, NonCocycleHasPositiveDefect)
{
    Rng rng = substream(75, 0);
    const auto f = random_cochain(2, rng);
    const auto rep = empirical_sup_defect(f, real_boundary_sampler(3, 1e-9), 200, 5);
    EXPECT_GT(rep.sup_abs, 1e-3);
    EXPECT_EQ(std::abs(coboundary(f)(rep.argmax_tuple)), rep.sup_abs);
    for (double v : rep.values) EXPECT_LE(v, rep.sup_abs);
}

TEST(EmpiricalDefect, Deterministic)
{
    Rng rng = substream(76, 0);
    const auto f = random_cochain(3, rng);
    const auto a = empirical_sup_defect(f, real_boundary_sampler(3, 1e-9), 500, 99);
    const auto b = empirical_sup_defect(f, real_boundary_sampler(3, 1e-9), 500, 99);
    EXPECT_EQ(a.sup_abs, b.sup_abs);
    EXPECT_EQ(a.argmax_index, b.argmax_index);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.draws, b.draws);
    const auto c = empirical_sup_defect(f, real_boundary_sampler(3, 1e-9), 500, 100);
    EXPECT_NE(a.values, c.values);
}

TEST(EmpiricalDefect, Errors)
{
    Rng rng = substream(77, 0);
    const auto f = random_cochain(2, rng);
    TupleSampler<Point> never{real_boundary_sampler(3, 1e-9).draw, [](const Tup&) { return false; }};
    EXPECT_THROW(empirical_sup_defect(f, never, 10, 1), SamplerExhausted);
    EXPECT_THROW(empirical_sup_defect(f, real_boundary_sampler(3, 1e-9), 0, 1), InvalidArgument);
}

TEST(Random, SubstreamsAreIndependentOfOrder)
{
    Rng a = substream(7, 3), b = substream(7, 3), c = substream(7, 4);
    EXPECT_EQ(a(), b());
    EXPECT_NE(substream(7, 3)(), c());
    std::vector<double> seq(1000), par(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        Rng r = substream(8, i);
        seq[i] = standard_normal(r);
    }
    parallel_for(1000, [&](std::size_t i) {
        Rng r = substream(8, i);
        par[i] = standard_normal(r);
    }, 4);
    EXPECT_EQ(seq, par);
}
