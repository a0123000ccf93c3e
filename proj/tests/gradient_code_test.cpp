#include <doctest.h>

#include <cmath>
#include <vector>

#include "codedfl/gradient_code.hpp"

using namespace codedfl;
using coding::AssignmentMatrix;
using coding::EncodingMatrix;

namespace {

std::vector<int> row(const AssignmentMatrix& m, int r) {
  std::vector<int> out;
  for (int j = 0; j < m.num_devices; ++j) out.push_back(m.at(r, j));
  return out;
}

template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

TEST_SUITE("gradient_code") {

TEST_CASE("assignment matrix matches the cyclic table") {
  const auto m = coding::build_assignment(2, 3);
  CHECK(row(m, 0) == std::vector<int>{1, 2, 3});
  CHECK(row(m, 1) == std::vector<int>{2, 3, 1});

  const auto single = coding::build_assignment(1, 5);
  CHECK(row(single, 0) == std::vector<int>{1, 2, 3, 4, 5});

  const auto wide = coding::build_assignment(3, 4);
  CHECK(row(wide, 0) == std::vector<int>{1, 2, 3, 4});
  CHECK(row(wide, 1) == std::vector<int>{2, 3, 4, 1});
  CHECK(row(wide, 2) == std::vector<int>{3, 4, 1, 2});

  CHECK_THROWS_AS(coding::build_assignment(5, 4), std::invalid_argument);
}

TEST_CASE("support-size one gives the identity code") {
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(1, 4, cfg, 99);
  CHECK(code.coeffs == fxp::FxMatrix::identity(4, cfg));
  const auto dv = coding::decode_vector(code, {0, 1, 2, 3});
  for (const auto& w : dv.weights) CHECK(w.to_real() == doctest::Approx(1.0));
}

TEST_CASE("full support means replication: every row decodes alone") {
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(5, 5, cfg, 7);
  for (int i = 0; i < 5; ++i) {
    const auto dv = coding::decode_vector(code, {i});
    CHECK(coding::residual_inf_norm(code, dv) <= coding::decode_tolerance(code));
  }
}

TEST_CASE("cyclic support structure: rows and columns") {
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(3, 7, cfg, 21);
  // Row i nonzero exactly on {i, i+1, i+2} mod 7; every column holds exactly
  // beta nonzeros (each partition reaches exactly beta codewords).
  for (int i = 0; i < 7; ++i) {
    const auto support = code.row_support(i);
    std::vector<bool> on(7, false);
    for (int s : support) on[std::size_t(s)] = true;
    for (int j = 0; j < 7; ++j) {
      if (on[std::size_t(j)])
        CHECK(code.coeffs.raw(i, j) != 0);
      else
        CHECK(code.coeffs.raw(i, j) == 0);
    }
  }
  for (int j = 0; j < 7; ++j) {
    int nonzeros = 0;
    for (int i = 0; i < 7; ++i)
      if (code.coeffs.raw(i, j) != 0) ++nonzeros;
    CHECK(nonzeros == 3);
  }
}

TEST_CASE("beta=2 gamma=3: every survivor pair decodes within tolerance") {
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(2, 3, cfg, 5);
  for (const auto& pair : std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}}) {
    const auto dv = coding::decode_vector(code, pair);
    CHECK(coding::residual_inf_norm(code, dv) <= coding::decode_tolerance(code));
  }
}

TEST_CASE("decoding is deterministic and validates its inputs") {
  const fxp::FxConfig cfg(48, 24);
  const auto code = coding::build_encoding(3, 6, cfg, 15);
  const auto a = coding::decode_vector(code, {0, 2, 4, 5});
  const auto b = coding::decode_vector(code, {0, 2, 4, 5});
  for (std::size_t i = 0; i < a.weights.size(); ++i)
    CHECK(a.weights[i].raw == b.weights[i].raw);

  CHECK_THROWS_AS(coding::decode_vector(code, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(coding::decode_vector(code, {0, 0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(coding::decode_vector(code, {0, 1, 2, 9}), std::invalid_argument);
}

TEST_CASE("every (beta, gamma) up to 6 decodes every survivor set") {
  const fxp::FxConfig cfg(48, 24);
  for (int gamma = 1; gamma <= 6; ++gamma) {
    for (int beta = 1; beta <= gamma; ++beta) {
      const auto code = coding::build_encoding(beta, gamma, cfg, 1000 + gamma * 10 + beta);
      const int need = code.min_survivors();
      for_each_subset(gamma, need, [&](const std::vector<int>& survivors) {
        const auto dv = coding::decode_vector(code, survivors);
        CHECK(coding::residual_inf_norm(code, dv) <= coding::decode_tolerance(code));
      });
    }
  }
}

TEST_CASE("construction rejects invalid parameters") {
  const fxp::FxConfig cfg(48, 24);
  CHECK_THROWS_AS(coding::build_encoding(0, 3, cfg, 1), std::invalid_argument);
  CHECK_THROWS_AS(coding::build_encoding(4, 3, cfg, 1), std::invalid_argument);
}

}  // TEST_SUITE
