#include <gtest/gtest.h>

#include "wiener/timegrid.hpp"

using namespace wiener;

namespace {

std::vector<std::string> names(std::span<const Rational> ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(t.to_string());
    return out;
}

}  // namespace

TEST(TimeGrid, SmallLevels) {
    EXPECT_EQ(names(grid_at_level(0).times()), (std::vector<std::string>{"1"}));
    EXPECT_EQ(names(grid_at_level(1).times()), (std::vector<std::string>{"1/2", "1"}));
    EXPECT_EQ(names(grid_at_level(2).times()), (std::vector<std::string>{"1/4", "1/2", "3/4", "1"}));
}

TEST(TimeGrid, LevelLimits) {
    EXPECT_THROW(grid_at_level(-1), DomainError);
    EXPECT_THROW(grid_at_level(21), RefusalError);
    EXPECT_THROW(grid_at_level(5, 4), RefusalError);
    EXPECT_EQ(grid_at_level(12).size(), 4096u);
}

TEST(TimeGrid, Nesting) {
    for (int level = 0; level < 10; ++level) {
        const auto coarse = grid_at_level(level);
        const auto fine = grid_at_level(level + 1);
        for (const auto& t : coarse.times())
            EXPECT_TRUE(std::binary_search(fine.times().begin(), fine.times().end(), t)) << t.to_string();
        EXPECT_EQ(fine.times().back(), Rational(1));
        EXPECT_GT(fine.times().front(), Rational(0));
    }
}

TEST(TimeGrid, MergeWith) {
    const std::vector<Rational> three_q{Rational(3, 4)};
    EXPECT_EQ(names(merge_with(grid_at_level(1), three_q)), (std::vector<std::string>{"1/2", "3/4", "1"}));
    const std::vector<Rational> half{Rational(1, 2)};
    EXPECT_EQ(merge_with(grid_at_level(2), half).size(), 4u);
    const std::vector<Rational> third{Rational(1, 3)};
    EXPECT_EQ(names(merge_with(grid_at_level(0), third)), (std::vector<std::string>{"1/3", "1"}));
    const std::vector<Rational> bad{Rational(3, 2)};
    EXPECT_THROW(merge_with(grid_at_level(0), bad), DomainError);
    const std::vector<Rational> zero{Rational(0)};
    EXPECT_THROW(merge_with(grid_at_level(0), zero), DomainError);
}

TEST(Rational, ParseAndCompare) {
    EXPECT_EQ(Rational::parse("3/2^2"), Rational(3, 4));
    EXPECT_EQ(Rational::parse("6/8"), Rational(3, 4));
    EXPECT_EQ(Rational::parse("1"), Rational(1));
    EXPECT_LT(Rational(1, 3), Rational(3, 8));
    EXPECT_TRUE(Rational(5, 16).is_dyadic());
    EXPECT_FALSE(Rational(1, 3).is_dyadic());
    EXPECT_EQ(Rational(5, 16).dyadic_level(), 4);
    EXPECT_EQ(Rational(1, 2) + Rational(1, 4), Rational(3, 4));
    EXPECT_EQ(Rational(1) - Rational(1, 4), Rational(3, 4));
    EXPECT_DOUBLE_EQ(Rational(3, 4).to_double(), 0.75);
}
