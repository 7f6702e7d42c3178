#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace invforge;
using testing_support::random_scalar;

namespace {

// Independent integer-polynomial oracle for Phi_n: x^n - 1 divided by Phi_d
// for each proper divisor d, all in exact integer long division.
std::vector<long> oracle_phi(int n) {
  std::vector<long> num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const auto div = oracle_phi(d);  // monic
    const std::size_t dd = div.size() - 1;
    std::vector<long> quot(num.size() - dd, 0);
    for (std::size_t i = num.size() - 1; i + 1 >= dd + 1 && i >= dd; --i) {
      const long c = num[i];
      quot[i - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * div[j];
      if (i == dd) break;
    }
    num = quot;
  }
  return num;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == QPoly({Rational(-1), Rational(1)}));
  CHECK(cyclotomic_polynomial(8) == QPoly({1, 0, 0, 0, 1}));
  CHECK(cyclotomic_polynomial(6) == QPoly({1, -1, 1}));
  for (int n = 1; n <= 30; ++n) {
    const auto o = oracle_phi(n);
    std::vector<Rational> c(o.begin(), o.end());
    CHECK(cyclotomic_polynomial(n) == QPoly(c));
    CHECK(cyclotomic_polynomial(n).degree() == euler_phi(n));
  }
}

TEST_CASE("zeta is a primitive root modulo Phi_n") {
  for (int n = 1; n <= 24; ++n) {
    const auto f = ScalarField::cyclotomic(n);
    const Scalar z = Scalar::zeta(f);
    CHECK(z.pow(n).is_one());
    for (int d = 1; d < n; ++d) {
      if (n % d == 0) CHECK_FALSE(z.pow(d).is_one());
    }
  }
}

TEST_CASE("inversion") {
  CHECK(invert_scalar(Scalar(Rational(3, 4))) == Scalar(Rational(4, 3)));
  const auto f8 = ScalarField::cyclotomic(8);
  CHECK(invert_scalar(Scalar::zeta(f8)) == -Scalar::zeta(f8, 3));
  const auto ft = ScalarField::rational_function();
  const Scalar t = Scalar::variable(ft);
  const Scalar one = Scalar::one(ft);
  CHECK(invert_scalar((t - one) / (t + one)) == (t + one) / (t - one));
  CHECK_THROWS_AS(invert_scalar(Scalar::zero(f8)), Error);
  try {
    invert_scalar(Scalar::zero(ft));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroInversion);
  }
}

TEST_CASE("Galois action") {
  const auto f8 = ScalarField::cyclotomic(8);
  const Scalar s = Scalar::zeta(f8) + Scalar::zeta(f8, -1);
  CHECK(galois_apply(1, s) == s);
  CHECK(galois_apply(3, s) == Scalar::zeta(f8, 3) + Scalar::zeta(f8, -3));
  CHECK(galois_apply(3, s) == -s);
  CHECK(galois_apply(3, Scalar::from_rational(f8, Rational(5, 7))) == Scalar::from_rational(f8, Rational(5, 7)));
  CHECK(galois_apply(3, Scalar(Rational(5, 7))) == Scalar(Rational(5, 7)));
  try {
    galois_apply(2, s);
    FAIL("expected BadGaloisIndex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadGaloisIndex);
  }
  try {
    galois_apply(1, Scalar::variable(ScalarField::rational_function()));
    FAIL("expected NotCyclotomic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCyclotomic);
  }
}

TEST_CASE("Galois composition") {
  std::mt19937_64 rng(testing_support::kSeed);
  for (int n : {4, 8, 12}) {
    const auto f = ScalarField::cyclotomic(n);
    for (int i = 0; i < 100; ++i) {
      const Scalar a = random_scalar(rng, f);
      for (int k = 1; k < n; ++k) {
        if (gcd_int(k, n) != 1) continue;
        for (int l = 1; l < n; ++l) {
          if (gcd_int(l, n) != 1) continue;
          CHECK(galois_apply(k, galois_apply(l, a)) == galois_apply((k * l) % n, a));
        }
      }
    }
  }
}

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(testing_support::kSeed + 1);
  const ScalarField fields[] = {ScalarField::rational(), ScalarField::cyclotomic(8), ScalarField::cyclotomic(9),
                                ScalarField::rational_function()};
  for (const auto& f : fields) {
    CAPTURE(f.to_string());
    const int reps = f.is_rational_function() ? 2000 : 10000;
    for (int i = 0; i < reps; ++i) {
      const Scalar a = random_scalar(rng, f), b = random_scalar(rng, f), c = random_scalar(rng, f);
      REQUIRE((a + b) + c == a + (b + c));
      REQUIRE(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) REQUIRE((invert_scalar(a) * a).is_one());
    }
  }
}

TEST_CASE("mixed fields are rejected") {
  try {
    (void)(Scalar::zeta(ScalarField::cyclotomic(8)) + Scalar::zeta(ScalarField::cyclotomic(4)));
    FAIL("expected FieldMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FieldMismatch);
  }
}

TEST_CASE("scalar literals") {
  const auto f8 = ScalarField::cyclotomic(8);
  CHECK(parse_scalar("1/2", ScalarField::rational()) == Scalar(Rational(1, 2)));
  CHECK(parse_scalar("z^2 - 1", f8) == Scalar::zeta(f8, 2) - Scalar::one(f8));
  CHECK(parse_scalar("z^-1", f8) == -Scalar::zeta(f8, 3));
  CHECK(parse_scalar("z4", f8) == Scalar::zeta(f8, 2));
  CHECK(parse_scalar("2z", f8) == Scalar::from_int(f8, 2) * Scalar::zeta(f8));
  const auto ft = ScalarField::rational_function();
  const Scalar t = Scalar::variable(ft);
  CHECK(parse_scalar("(t+1)/(t-1)", ft) == (t + Scalar::one(ft)) / (t - Scalar::one(ft)));
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InternalCheckFailed;
  };
  CHECK(code_of([&] { parse_scalar("1/0", ScalarField::rational()); }) == ErrorCode::FieldError);
  CHECK(code_of([&] { parse_scalar("z", ScalarField::rational()); }) == ErrorCode::FieldError);
  CHECK(code_of([&] { parse_scalar("z3", f8); }) == ErrorCode::FieldError);
  CHECK(code_of([&] { parse_scalar("t", f8); }) == ErrorCode::FieldError);
  CHECK(code_of([&] { parse_scalar("1 +", f8); }) == ErrorCode::FieldError);
}

TEST_CASE("rendering round-trips through the parser") {
  std::mt19937_64 rng(testing_support::kSeed + 2);
  const ScalarField fields[] = {ScalarField::rational(), ScalarField::cyclotomic(8), ScalarField::cyclotomic(5),
                                ScalarField::rational_function()};
  for (const auto& f : fields) {
    for (int i = 0; i < 200; ++i) {
      const Scalar a = random_scalar(rng, f);
      CAPTURE(a.to_string());
      CHECK(parse_scalar(a.to_string(), f) == a);
    }
  }
  CHECK(Scalar::variable(ScalarField::rational_function()).to_string() == "t");
  CHECK((Scalar::variable(ScalarField::rational_function()) + Scalar::one(ScalarField::rational_function())).to_string() ==
        "t + 1");
}
