#include <catch2/catch_amalgamated.hpp>

#include "enteq/posvec.hpp"

using namespace enteq;

TEST_CASE("componentwise arithmetic") {
  const PosVec a = PosVec::strict({1, 2});
  const PosVec b = PosVec::strict({3, 4});
  CHECK(cw_add(a, b).coords() == std::vector<double>{4, 6});
  CHECK(cw_mul(a, b).coords() == std::vector<double>{3, 8});
  CHECK(cw_div(PosVec::strict({1, 1}), PosVec::strict({2, 4})).coords() ==
        std::vector<double>{0.5, 0.25});
  CHECK(cw_scale(a, 3.0).coords() == std::vector<double>{3, 6});
}

TEST_CASE("construction validates the cone") {
  CHECK_THROWS_AS(PosVec::strict({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(PosVec::strict({-1.0}), DomainError);
  CHECK_THROWS_AS(PosVec::nonneg({-0.5}), DomainError);
  CHECK_THROWS_AS(PosVec::nonneg({std::nan("")}), DomainError);
  CHECK_THROWS_AS(PosVec::strict({1.0 / 0.0}), DomainError);
  CHECK_NOTHROW(PosVec::nonneg({0.0, 1.0}));
}

TEST_CASE("dimension mismatch is rejected") {
  const PosVec a = PosVec::strict({1, 2});
  const PosVec b = PosVec::strict({1, 2, 3});
  CHECK_THROWS_AS(cw_add(a, b), DimensionError);
  CHECK_THROWS_AS(cw_mul(a, b), DimensionError);
  CHECK_THROWS_AS(cw_div(a, b), DimensionError);
}

TEST_CASE("division requires a strictly positive divisor") {
  const PosVec a = PosVec::strict({1});
  CHECK_THROWS_AS(cw_div(a, PosVec::nonneg({0.0})), DomainError);
}

TEST_CASE("scaling requires a positive factor") {
  const PosVec a = PosVec::strict({1});
  CHECK_THROWS_AS(cw_scale(a, 0.0), DomainError);
  CHECK_THROWS_AS(cw_scale(a, -2.0), DomainError);
}

TEST_CASE("strictness propagation") {
  const PosVec s = PosVec::strict({1, 1});
  const PosVec c = PosVec::nonneg({0, 1});
  CHECK(cw_add(s, s).is_strict());
  CHECK(cw_add(s, c).is_strict());   // sum with a strict operand stays strict
  CHECK_FALSE(cw_add(c, c).is_strict());
  CHECK(cw_mul(s, s).is_strict());
  CHECK_FALSE(cw_mul(s, c).is_strict());  // product can vanish
  CHECK(cw_div(s, s).is_strict());
  CHECK_FALSE(cw_div(c, s).is_strict());
  CHECK(cw_scale(s, 2.0).is_strict());
}

TEST_CASE("zero and one vectors") {
  CHECK(PosVec::zeros(3).is_zero());
  CHECK_FALSE(PosVec::zeros(3).all_positive());
  CHECK(PosVec::ones(3).all_positive());
  CHECK(PosVec::nonneg({0, 0}).is_zero());
  CHECK_FALSE(PosVec::nonneg({0, 1}).is_zero());
}

TEST_CASE("one_minus lives on the open unit cube") {
  const PosVec t = PosVec::strict({0.25, 0.75});
  CHECK(one_minus(t).coords() == std::vector<double>{0.75, 0.25});
  CHECK_THROWS_AS(one_minus(PosVec::strict({1.5, 0.5})), DomainError);
  CHECK_THROWS_AS(one_minus(PosVec::strict({1.0})), DomainError);
  CHECK(in_open_unit_cube(t));
  CHECK_FALSE(in_open_unit_cube(PosVec::nonneg({0.0, 0.5})));
}
