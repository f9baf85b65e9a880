#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "enteq/dsl.hpp"
#include "enteq/verifier.hpp"

using namespace enteq;

namespace {
PosVec sc(double v) { return PosVec::scalar(v); }
const MultFn kIdentity = MultFn::power({1.0});
}  // namespace

TEST_CASE("samplers are deterministic and hit their regions exactly") {
  const SampleSpec cube{.k = 3, .count = 500, .seed = 9,
                        .region = Region::OpenCube};
  const SampleSpec cone{.k = 2, .count = 500, .seed = 9,
                        .region = Region::Cone, .lo = 0.0, .hi = 10.0};
  for (std::size_t i = 0; i < cube.count; ++i) {
    rng::Stream a(cube.seed, i), b(cube.seed, i);
    const PosVec p = sample::open_cube_point(a, cube.k);
    const PosVec q = sample::open_cube_point(b, cube.k);
    CHECK(p.coords() == q.coords());
    CHECK(in_open_unit_cube(p));
  }
  for (std::size_t i = 0; i < cone.count; ++i) {
    rng::Stream a(cone.seed, i);
    const PosVec p = sample::cone_point(a, cone.k, cone.lo, cone.hi);
    for (std::size_t j = 0; j < p.dim(); ++j) {
      CHECK(p[j] > cone.lo);
      CHECK(p[j] <= cone.hi);
    }
  }
  for (std::size_t i = 0; i < 500; ++i) {
    rng::Stream a(17, i);
    const auto [x, y] = sample::feim_pair(a, 3);
    CHECK(in_open_unit_cube(x));
    CHECK(in_open_unit_cube(y));
    CHECK(in_open_unit_cube(cw_add(x, y)));
  }
}

TEST_CASE("modified residual at hand points") {
  const TriSolution sh = TriSolution::shannon();
  CHECK(std::fabs(residual_modified(sh, kIdentity, sc(1), sc(2), sc(3))) <=
        1e-12);

  // mu == 1 and psi = ln(s): ln 6 - ln 6 - ln 1 = 0
  const TriSolution one =
      TriSolution::case_one(1, PsiFn::expression("ln(s[0])", 1));
  CHECK(residual_modified(one, MultFn::one(1), sc(1), sc(2), sc(3)) == 0.0);

  // psi(s) = s violates psi(1) = 0; the residual is exactly -psi(1) = -1
  const TriSolution broken =
      TriSolution::unchecked_case_one(1, PsiFn::linear({1.0}));
  CHECK(residual_modified(broken, MultFn::one(1), sc(1), sc(2), sc(3)) == -1.0);
  for (std::uint64_t i = 0; i < 10; ++i) {
    rng::Stream st(3, i);
    const double x = st.log_uniform(0.1, 10), y = st.log_uniform(0.1, 10),
                 z = st.log_uniform(0.1, 10);
    CHECK(std::fabs(residual_modified(broken, MultFn::one(1), sc(x), sc(y),
                                      sc(z)) +
                    1.0) <= 1e-13);
  }
}

TEST_CASE("classic entropy equation residual") {
  const TriSolution sh = TriSolution::shannon();
  CHECK(std::fabs(residual_entropy_classic(sh, 1, 1, 1)) <= 1e-12);
  CHECK(std::fabs(residual_entropy_classic(sh, 0.2, 0.3, 0.5)) <= 1e-12);

  // shannon + 1 (psi shifted by one): constants break the two-term side
  const TriSolution shifted = TriSolution::unchecked_case_projection(
      MultFn::power({1}), LogFn::natural(1),
      PsiFn::expression("0 - s[0]*ln(s[0]) + 1", 1));
  for (std::uint64_t i = 0; i < 20; ++i) {
    rng::Stream st(19, i);
    const double x = st.log_uniform(0.1, 10), y = st.log_uniform(0.1, 10),
                 z = st.log_uniform(0.1, 10);
    CHECK(std::fabs(residual_entropy_classic(shifted, x, y, z) + 1.0) <= 1e-12);
  }
}

TEST_CASE("mu(t) = t specialization equals modified with the identity") {
  const TriSolution proj = TriSolution::case_projection(
      MultFn::power({1}), LogFn::natural(1), PsiFn::neg_x_log_x());
  CHECK(residual_ent_special(proj, 1, 1, 1) == 0.0);
  const TriSolution sh = TriSolution::shannon();
  CHECK(std::fabs(residual_ent_special(sh, 2, 3, 5)) <= 1e-11);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    rng::Stream st(23, i);
    const double x = st.log_uniform(1e-3, 10), y = st.log_uniform(1e-3, 10),
                 z = st.log_uniform(1e-3, 10);
    CHECK(residual_ent_special(sh, x, y, z) ==
          residual_modified(sh, kIdentity, sc(x), sc(y), sc(z)));
  }
}

TEST_CASE("feim residual on the three branches") {
  const HFn proj =
      HFn::projection_branch(kIdentity, LogFn::natural(1), 0.0);
  CHECK(std::fabs(residual_feim(proj, kIdentity, sc(0.2), sc(0.3))) <= 1e-12);

  const HFn one = HFn::one_branch(LogFn::natural(1), 0.0);
  CHECK(std::fabs(residual_feim(one, MultFn::one(1), sc(0.25), sc(0.25))) <=
        1e-12);

  // c != b is admissible for the equation itself
  const MultFn sq = MultFn::power({2});
  const HFn other = HFn::other_branch(sq, 1.0, 3.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    rng::Stream st(29, i);
    const auto [x, y] = sample::feim_pair(st, 1);
    CHECK(std::fabs(residual_feim(other, sq, x, y)) <= 1e-12);
  }

  CHECK_THROWS_AS(residual_feim(proj, kIdentity, sc(0.7), sc(0.7)),
                  DomainError);
}

TEST_CASE("derived h of every constructor-built case satisfies feim") {
  struct Item {
    TriSolution f;
  };
  const TriSolution fs[] = {
      TriSolution::shannon(),
      TriSolution::case_projection(MultFn::power({0, 1}), LogFn({2, -1}),
                                   PsiFn::constant(0.0)),
      TriSolution::case_one(2, PsiFn::linear({1, -1})),
      TriSolution::case_other(MultFn::power({2, 0.5}), 1.5,
                              PsiFn::constant(-1.5)),
      TriSolution::case_zero_mu(LogFn::natural(2), PsiFn::constant(3.0))};
  for (const TriSolution& f : fs) {
    const SampleSpec spec{.k = f.dim(), .count = 2000, .seed = 12,
                          .region = Region::FeimD};
    const auto report =
        check_feim(derive_h(f), *f.declared_mu(), spec, {1e-10, 1e-10});
    CHECK(report.pass);
  }
}

TEST_CASE("sampled checks pass for constructor-built solutions, k = 1..3") {
  for (std::size_t k : {1u, 2u, 3u}) {
    std::vector<double> alpha(k, 0.0);
    alpha[k - 1] = 1.0;
    std::vector<double> alpha_other(k, 1.3);
    const TriSolution fs[] = {
        TriSolution::case_projection(MultFn::power(alpha), LogFn::natural(k),
                                     PsiFn::constant(0.0)),
        TriSolution::case_one(k, PsiFn::constant(0.0)),
        TriSolution::case_other(MultFn::power(alpha_other), -0.7,
                                PsiFn::constant(0.7)),
        TriSolution::case_zero_mu(LogFn::natural(k), PsiFn::constant(1.0))};
    for (const TriSolution& f : fs) {
      const SampleSpec spec{.k = k, .count = 1000, .seed = 77};
      const auto report = check_modified(f, *f.declared_mu(), spec);
      INFO("k=" << k << " case=" << static_cast<int>(f.kind()));
      CHECK(report.pass);
      CHECK(report.max_abs_residual <= report.tolerance);
    }
  }
}

TEST_CASE("zero-residual family at 1e5 samples, k = 3") {
  const std::size_t k = 3;
  const TriSolution fs[] = {
      TriSolution::case_projection(MultFn::power({0, 0, 1}),
                                   LogFn({1.5, -0.5, 2}),
                                   PsiFn::neg_x_log_x()),
      TriSolution::case_one(k, PsiFn::linear({2, -1.5, -0.5})),
      TriSolution::case_other(MultFn::power({0.5, -1, 2}), 2.0,
                              PsiFn::constant(-2.0)),
      TriSolution::case_zero_mu(LogFn::natural(k), PsiFn::constant(-3.0))};
  for (const TriSolution& f : fs) {
    const SampleSpec spec{.k = k, .count = 100000, .seed = 5150};
    const auto r = check_modified(f, *f.declared_mu(), spec, {1e-9, 1e-9}, 4);
    INFO("case " << static_cast<int>(f.kind()));
    CHECK(r.pass);
  }
}

TEST_CASE("symmetry check") {
  const SampleSpec spec{.k = 1, .count = 2000, .seed = 5};
  CHECK(check_symmetry(TriSolution::shannon(), spec).pass);
  CHECK(check_symmetry(TriSolution::case_other(MultFn::power({2}), 1.0,
                                               PsiFn::constant(-1.0)),
                       spec)
            .pass);

  const auto bad = check_symmetry(TriSolution::user_expr("x[0]", 1), spec);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_abs_residual > 0.1);

  // the spec's hand witness: f(1,2,3) vs f(2,1,3) gap 1
  const TriSolution ux = TriSolution::user_expr("x[0]", 1);
  CHECK(std::fabs(ux(sc(1), sc(2), sc(3)) - ux(sc(2), sc(1), sc(3))) == 1.0);
}

TEST_CASE("homogeneity check") {
  const SampleSpec spec{.k = 1, .count = 2000, .seed = 5};
  CHECK(check_homogeneity(TriSolution::shannon(), 1, spec).pass);

  // shannon + 1 is not homogeneous
  const TriSolution shifted = TriSolution::unchecked_case_projection(
      MultFn::power({1}), LogFn::natural(1),
      PsiFn::expression("0 - s[0]*ln(s[0]) + 1", 1));
  CHECK_FALSE(check_homogeneity(shifted, 1, spec).pass);

  // degree-2 form
  const TriSolution quad = TriSolution::user_expr(
      "x[0]^2 + y[0]^2 + z[0]^2", 1);
  CHECK(check_homogeneity(quad, 2, spec).pass);
  CHECK_FALSE(check_homogeneity(quad, 1, spec).pass);
}

TEST_CASE("associativity reduction") {
  const SampleSpec spec{.k = 1, .count = 2000, .seed = 13};

  const auto sum = [](const PosVec& u, const PosVec& v) {
    return u[0] + v[0];
  };
  const AssocResult ok = check_associativity(sum, spec);
  CHECK(ok.pass);
  // the extracted phi is the identity here
  CHECK(ok.phi(sc(3.0)) == 3.0);

  const auto prod = [](const PosVec& u, const PosVec& v) {
    return u[0] * v[0];
  };
  const AssocResult bad = check_associativity(prod, spec);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->violation > 0.0);

  // the spec's hand witness for the exchange identity: A(1,5) vs A(2,4)
  CHECK(std::fabs(prod(sc(1), sc(5)) - prod(sc(2), sc(4))) == 3.0);

  const auto first = [](const PosVec& u, const PosVec&) { return u[0]; };
  CHECK_FALSE(check_associativity(first, spec).pass);

  const SampleSpec spec2{.k = 2, .count = 1000, .seed = 13};
  const auto expsum = [](const PosVec& u, const PosVec& v) {
    return std::exp((u[0] + v[0]) * 0.1 + (u[1] + v[1]) * 0.05);
  };
  CHECK(check_associativity(expsum, spec2).pass);
}

TEST_CASE("mult symmetry lemma oracle") {
  const SampleSpec spec{.k = 1, .count = 100, .seed = 3,
                        .region = Region::OpenCube};
  const Witness w1 = oracle_lemma_mult(MultFn::power({1}), spec);
  CHECK(w1.found);
  CHECK(w1.violation > 1e-6);
  // hand check from the spec: |mu(1/4) - mu(3/4)| = 1/2 for the identity
  CHECK(std::fabs(kIdentity(sc(0.25)) - kIdentity(sc(0.75))) == 0.5);
  // the reported witness reproduces its violation
  const PosVec x = PosVec::strict(w1.point[0]);
  CHECK(std::fabs(kIdentity(x) - kIdentity(one_minus(x))) == w1.violation);

  CHECK_FALSE(oracle_lemma_mult(MultFn::power({0}), spec).found);
  CHECK_FALSE(oracle_lemma_mult(MultFn::zero_map(1), spec).found);

  const SampleSpec spec2{.k = 2, .count = 100, .seed = 3,
                         .region = Region::OpenCube};
  CHECK(oracle_lemma_mult(MultFn::power({2, -1}), spec2).found);
}

TEST_CASE("log symmetry lemma oracle") {
  const SampleSpec spec{.k = 1, .count = 100, .seed = 3,
                        .region = Region::OpenCube};
  const Witness w = oracle_lemma_log(LogFn({1}), spec);
  CHECK(w.found);
  // hand value: |ln 0.2 - ln 0.8| = ln 4
  CHECK(std::fabs(LogFn({1})(sc(0.2)) - LogFn({1})(sc(0.8))) ==
        Catch::Approx(std::log(4.0)).epsilon(1e-14));

  CHECK_FALSE(oracle_lemma_log(LogFn({0}), spec).found);

  const SampleSpec spec2{.k = 2, .count = 100, .seed = 3,
                         .region = Region::OpenCube};
  CHECK(oracle_lemma_log(LogFn({1, -2}), spec2).found);
}

TEST_CASE("normalization oracle") {
  const SampleSpec spec{.k = 1, .count = 500, .seed = 21};

  const Witness one = oracle_normalization(TriSolution::Case::One, 1.0, spec);
  CHECK(one.found);
  CHECK(one.violation == 1.0);  // exactly |delta| when mu == 1

  const Witness proj =
      oracle_normalization(TriSolution::Case::Projection, 1.0, spec);
  CHECK(proj.found);
  CHECK(proj.violation > 0.5);

  // hand check at (1,1,1): |mu(2) * delta| = 2
  const TriSolution f = TriSolution::unchecked_case_projection(
      kIdentity, LogFn::natural(1), PsiFn::constant(1.0));
  CHECK(std::fabs(residual_modified(f, kIdentity, sc(1), sc(1), sc(1)) + 2.0) <=
        1e-13);

  const Witness other =
      oracle_normalization(TriSolution::Case::Other, 1e-3, spec);
  CHECK(other.found);
  CHECK(other.violation >= 0.5e-3);

  for (double delta : {1.0, -1.0, 1e-3}) {
    const Witness zm =
        oracle_normalization(TriSolution::Case::ZeroMu, delta, spec);
    CHECK_FALSE(zm.found);
    CHECK(zm.violation == 0.0);
  }
}

TEST_CASE("reports are bit-identical across thread counts") {
  const TriSolution sh = TriSolution::shannon();
  const SampleSpec spec{.k = 1, .count = 20000, .seed = 31};
  const auto r1 = check_modified(sh, kIdentity, spec, {}, 1);
  for (int threads : {2, 3, 8}) {
    const auto rn = check_modified(sh, kIdentity, spec, {}, threads);
    CHECK(rn.max_abs_residual == r1.max_abs_residual);
    CHECK(rn.mean_abs_residual == r1.mean_abs_residual);
    CHECK(rn.argmax_index == r1.argmax_index);
    CHECK(rn.argmax_point == r1.argmax_point);
    CHECK(rn.tolerance == r1.tolerance);
    CHECK(rn.pass == r1.pass);
  }
}

TEST_CASE("the argmax re-evaluates to the reported maximum") {
  const TriSolution broken =
      TriSolution::unchecked_case_one(1, PsiFn::expression("s[0]*0.5", 1));
  const SampleSpec spec{.k = 1, .count = 1000, .seed = 41};
  const auto r = check_modified(broken, MultFn::one(1), spec);
  CHECK_FALSE(r.pass);
  REQUIRE(r.argmax_point.size() == 3);
  const double re = residual_modified(
      broken, MultFn::one(1), PosVec::strict(r.argmax_point[0]),
      PosVec::strict(r.argmax_point[1]), PosVec::strict(r.argmax_point[2]));
  CHECK(std::fabs(re) == r.max_abs_residual);
}

TEST_CASE("dimension guards") {
  const TriSolution sh = TriSolution::shannon();
  const SampleSpec spec{.k = 2, .count = 10, .seed = 1};
  CHECK_THROWS_AS(check_modified(sh, kIdentity, spec), DimensionError);
  CHECK_THROWS_AS(check_entropy_classic(sh, spec), DimensionError);
  const TriSolution two = TriSolution::case_one(2, PsiFn::constant(0.0));
  CHECK_THROWS_AS(residual_entropy_classic(two, 1, 1, 1), DimensionError);
  CHECK_THROWS_AS(residual_ent_special(two, 1, 1, 1), DimensionError);
}
