#include <gtest/gtest.h>

#include "wiener/pathsets.hpp"
#include "wiener/setspec.hpp"
#include "wiener/verify.hpp"

using namespace wiener;

namespace {

Rational q(std::int64_t k, int level) { return Rational::dyadic(k, level); }

PiecewiseLinear pl(std::vector<Breakpoint> pts) { return PiecewiseLinear::from_points(std::move(pts)); }

PiecewiseLinear line(double v0, double v1) { return pl({{Rational(0), v0}, {Rational(1), v1}}); }

std::vector<Rational> grid(std::initializer_list<Rational> ts) { return ts; }

// dense check at 2^14 + 1 points
bool dense_contains(const BandSet& band, const PiecewiseLinear& path) {
    constexpr int n = 1 << 14;
    for (int k = 0; k <= n; ++k) {
        const Rational t = q(k, 14);
        const double x = path.at(t);
        if (x < band.lower(t) || x > band.upper(t)) return false;
    }
    return true;
}

PiecewiseLinear random_path(detail::TestRng& rng, int level, double scale) {
    std::vector<Breakpoint> pts{{Rational(0), 0.0}};
    double x = 0.0;
    for (int k = 1; k <= (1 << level); ++k) {
        x += rng.uniform(-scale, scale);
        pts.push_back({q(k, level), x});
    }
    return pl(std::move(pts));
}

}  // namespace

TEST(PiecewiseLinear, Validation) {
    EXPECT_THROW(pl({}), DomainError);
    EXPECT_THROW(pl({{Rational(1, 2), 0.0}, {Rational(1, 4), 1.0}}), DomainError);
    EXPECT_THROW(pl({{Rational(0), 0.0}, {Rational(1), HUGE_VAL}}), DomainError);
    EXPECT_THROW(PiecewiseLinear::constant(std::nan("")), DomainError);
    const auto f = pl({{Rational(0), 0.0}, {Rational(1, 2), -1.0}, {Rational(1), -1.0}});
    EXPECT_DOUBLE_EQ(f.at(Rational(1, 4)), -0.5);
    EXPECT_DOUBLE_EQ(f.at(0.75), -1.0);
}

TEST(BandSet, EmptinessRules) {
    EXPECT_FALSE(BandSet::constant(-1, 1).is_empty());
    EXPECT_TRUE(BandSet::constant(0.5, 1).is_empty());  // misses x(0) = 0
    EXPECT_TRUE(BandSet(line(0, 1), line(0, -1)).is_empty());
    EXPECT_FALSE(BandSet(line(0, 0.5), line(0, 0.5)).is_empty());  // degenerate, not empty
    EXPECT_FALSE(BandSet::whole_space().is_empty());
}

TEST(Project, Examples) {
    const auto r = project(BandSet::constant(-1, 1), grid({Rational(1, 2), Rational(1)}));
    EXPECT_EQ(r.lo, (std::vector<double>{-1, -1}));
    EXPECT_EQ(r.hi, (std::vector<double>{1, 1}));

    const BandSet barrier(PiecewiseLinear::constant(-kInf), PiecewiseLinear::constant(0.7));
    const auto g = grid_at_level(3);
    const auto r2 = project(barrier, g.times());
    for (std::size_t i = 0; i < r2.size(); ++i) {
        EXPECT_EQ(r2.lo[i], -kInf);
        EXPECT_EQ(r2.hi[i], 0.7);
    }

    const BandSet bent(PiecewiseLinear::constant(-kInf),
                       pl({{Rational(0), 0.0}, {Rational(1, 2), -1.0}, {Rational(1), -1.0}}));
    const auto r3 = project(bent, grid({Rational(1, 4), Rational(1, 2), Rational(1)}));
    EXPECT_EQ(r3.hi, (std::vector<double>{-0.5, -1.0, -1.0}));
    EXPECT_THROW(project(bent, grid({Rational(1, 4), Rational(1)})), PreconditionError);
}

TEST(Contains, Examples) {
    const auto zero = line(0, 0);
    EXPECT_TRUE(contains(BandSet::constant(-1, 1), zero));
    EXPECT_FALSE(contains(BandSet(line(0, 0.5), PiecewiseLinear::constant(kInf)), zero));
    EXPECT_THROW(contains(BandSet::constant(-1, 1), line(0.1, 0)), DomainError);
}

TEST(Contains, MatchesDenseSampling) {
    detail::TestRng rng(11);
    int members = 0;
    for (int i = 0; i < 200; ++i) {
        const BandSet band = detail::random_band(rng, 3, 0.2, 0.3, 2.0);
        const auto path = random_path(rng, 5, 0.4);
        const bool c = contains(band, path);
        members += c;
        EXPECT_EQ(c, dense_contains(band, path)) << i;
    }
    EXPECT_GT(members, 10);
    EXPECT_LT(members, 190);
}

TEST(Intersect, Examples) {
    const BandSet a = BandSet::constant(-1, 1);
    const BandSet b(PiecewiseLinear::constant(-kInf), PiecewiseLinear::constant(0.5));
    const auto ab = intersect(a, b);
    ASSERT_TRUE(ab);
    EXPECT_EQ(*ab, BandSet::constant(-1, 0.5));

    const BandSet lo(PiecewiseLinear::constant(-kInf), line(0.5, -1));
    const BandSet hi(line(-0.5, 1), PiecewiseLinear::constant(kInf));
    EXPECT_FALSE(intersect(lo, hi));
    EXPECT_EQ(intersect(a, a), a);
}

TEST(Intersect, AlgebraicProperties) {
    detail::TestRng rng(5);
    for (int i = 0; i < 100; ++i) {
        const BandSet a = detail::random_band(rng), b = detail::random_band(rng), c = detail::random_band(rng);
        const auto ab = intersect(a, b), ba = intersect(b, a);
        ASSERT_EQ(ab.has_value(), ba.has_value());
        const auto g = merge_with(grid_at_level(6), std::vector<Rational>{});
        if (ab) {
            for (const auto& t : g) {
                EXPECT_EQ(ab->lower(t), ba->lower(t));
                EXPECT_EQ(ab->upper(t), ba->upper(t));
                EXPECT_EQ(ab->lower(t), std::max(a.lower(t), b.lower(t)));
                EXPECT_EQ(ab->upper(t), std::min(a.upper(t), b.upper(t)));
            }
        }
        const auto left = ab ? intersect(*ab, c) : std::nullopt;
        const auto bc = intersect(b, c);
        const auto right = bc ? intersect(a, *bc) : std::nullopt;
        ASSERT_EQ(left.has_value(), right.has_value()) << i;
        if (left)
            for (const auto& t : g) {
                EXPECT_EQ(left->lower(t), right->lower(t));
                EXPECT_EQ(left->upper(t), right->upper(t));
            }
    }
}

TEST(Intersect, LowerAboveUpperInTheMiddle) {
    // lower rises above upper only on (1/4, 3/4)
    const BandSet a(pl({{Rational(0), -1.0}, {Rational(1, 2), 1.0}, {Rational(1), -1.0}}), PiecewiseLinear::constant(kInf));
    const BandSet b(PiecewiseLinear::constant(-kInf), line(0.5, 0.5));
    EXPECT_FALSE(intersect(a, b));
}

TEST(Subset, Basics) {
    EXPECT_TRUE(is_subset(BandSet::constant(-1, 1), BandSet::constant(-2, 2)));
    EXPECT_TRUE(is_subset(BandSet::constant(-1, 1), BandSet::whole_space()));
    EXPECT_FALSE(is_subset(BandSet::constant(-2, 1), BandSet::constant(-1, 2)));
    EXPECT_THROW(DifferenceSet(BandSet::constant(-2, 2), BandSet::constant(-3, 1)), DomainError);
}

TEST(Structural, Examples) {
    const BandSet band = BandSet::constant(-1, 1);
    const auto member = pl({{Rational(0), 0.0}, {Rational(1, 2), 0.9}, {Rational(1), -0.5}});
    const auto rep = structural_relation_check(band, member, 10);
    EXPECT_TRUE(rep.member);
    EXPECT_FALSE(rep.first_excluded_level);
    EXPECT_EQ(rep.levels_checked, 11);
    EXPECT_TRUE(rep.consistent);

    // violates only on (1/4, 1/2): peak at 3/8, first met by the level-3 grid
    const auto spike = pl({{Rational(0), 0.0}, {Rational(1, 4), 0.5}, {Rational(3, 8), 1.5}, {Rational(1, 2), 0.5}, {Rational(1), 0.0}});
    const auto rep2 = structural_relation_check(band, spike, 10);
    EXPECT_FALSE(rep2.member);
    EXPECT_EQ(rep2.first_excluded_level, 3);
    EXPECT_TRUE(rep2.consistent);

    const auto end_out = line(0, 1.5);
    EXPECT_EQ(structural_relation_check(band, end_out, 10).first_excluded_level, 0);
}

TEST(Structural, RandomPairsConsistent) {
    detail::TestRng rng(21);
    for (int i = 0; i < 100; ++i) {
        const BandSet band = detail::random_band(rng);
        const auto path = random_path(rng, 6, 0.3);
        EXPECT_TRUE(structural_relation_check(band, path, 10).consistent) << i;
    }
}

TEST(Union, ArityAndDisjointness) {
    const BandSet below(PiecewiseLinear::constant(-kInf), line(0, -1));
    const BandSet above(line(0, 1), PiecewiseLinear::constant(kInf));
    const UnionSet u({below, above});
    EXPECT_TRUE(u.disjoint[0][1]);
    EXPECT_FALSE(u.disjoint[0][0]);
    EXPECT_THROW(UnionSet({}), DomainError);
}

TEST(SetSpec, RoundTrip) {
    const std::string text = R"({"type":"union","members":[
        {"type":"band","lower":"-inf","upper":[["0","1"],["1/2^2","0.5"],["1","2"]]},
        {"type":"band","lower":[["0","-1"],["1","-0.25"]],"upper":"+inf"}]})";
    const SetExpr e = parse_set_spec(text);
    ASSERT_TRUE(std::holds_alternative<UnionSet>(e));
    const auto& u = std::get<UnionSet>(e);
    EXPECT_DOUBLE_EQ(u.members[0].upper(Rational(1, 4)), 0.5);
    EXPECT_DOUBLE_EQ(u.members[1].lower(Rational(1, 2)), -0.625);
    const SetExpr again = parse_set_spec(to_json(e).dump());
    EXPECT_EQ(to_json(again), to_json(e));
    EXPECT_EQ(breakpoints(e), (std::vector<Rational>{Rational(1, 4), Rational(1)}));
}

TEST(SetSpec, RejectsMalformed) {
    EXPECT_THROW(parse_set_spec(std::string("{")), SpecError);
    EXPECT_THROW(parse_set_spec(std::string(R"({"type":"blob"})")), SpecError);
    EXPECT_THROW(parse_set_spec(std::string(R"({"type":"band","lower":"-inf","upper":"+inf","x":1})")), SpecError);
    EXPECT_THROW(parse_set_spec(std::string(R"({"type":"band","lower":[["1/3","0"]],"upper":"+inf"})")), SpecError);
    EXPECT_THROW(parse_set_spec(std::string(R"({"type":"band","lower":[["0","abc"]],"upper":"+inf"})")), SpecError);
    EXPECT_THROW(parse_set_spec(std::string(R"({"type":"band","lower":[["0","0"],["2","0"]],"upper":"+inf"})")), SpecError);
}
