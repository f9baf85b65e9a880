#pragma once

// Random well-formed expression trees for round-trip testing.

#include <string>
#include <utility>

#include "enteq/dsl.hpp"
#include "enteq/rng.hpp"

namespace enteq::testsupport {

inline dsl::Expr random_expr(rng::Stream& st, int depth, int k) {
  using namespace dsl;
  const auto pick = [&](std::uint64_t n) {
    return static_cast<int>(st.next_u64() % n);
  };

  if (depth <= 0 || pick(4) == 0) {  // leaf
    switch (pick(3)) {
      case 0: {
        static const double nice[] = {0.0, 1.0,   2.0,   3.5,  0.25,
                                      10.0, 100.0, 0.001, 42.0, 6.25e-3};
        return Expr{Number{nice[pick(10)]}, {}};
      }
      case 1:
        return Expr{Constant{pick(2) == 0 ? "e" : "pi"}, {}};
      default: {
        static const Var vars[] = {Var::X, Var::Y, Var::Z, Var::S};
        return Expr{VarRef{vars[pick(4)], pick(static_cast<std::uint64_t>(k))},
                    {}};
      }
    }
  }
  switch (pick(7)) {
    case 0:
      return Expr{Neg{make(random_expr(st, depth - 1, k))}, {}};
    case 1:
    case 2:
    case 3:
    case 4: {
      static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                  BinOp::Div, BinOp::Pow};
      const BinOp op = ops[pick(5)];
      auto lhs = make(random_expr(st, depth - 1, k));
      auto rhs = make(random_expr(st, depth - 1, k));
      return Expr{Binary{op, std::move(lhs), std::move(rhs)}, {}};
    }
    default: {
      static const Func fs[] = {Func::Ln, Func::Log2, Func::Log10, Func::Exp,
                                Func::Abs};
      return Expr{Call{fs[pick(5)], make(random_expr(st, depth - 1, k))}, {}};
    }
  }
}

}  // namespace enteq::testsupport
