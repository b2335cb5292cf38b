#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>

#include "foodqa/kernels.hpp"
#include "foodqa/rng.hpp"

using namespace foodqa;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, bool with_zero_row) {
  Rng rng = make_rng(seed, "kernels");
  Matrix m(r, c);
  for (double& v : m.data()) v = uniform_real(rng) * 2 - 1;
  if (with_zero_row && r > 2)
    for (double& v : m.row(2)) v = 0.0;
  return m;
}

// Brute-force neighbor list with the documented ordering.
std::vector<Neighbor> brute_knn(const Matrix& x, std::size_t i, std::size_t k) {
  std::vector<Neighbor> all;
  for (std::size_t j = 0; j < x.rows(); ++j) {
    if (j == i) continue;
    double d = 0, na = 0, nb = 0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      d += x.at(i, c) * x.at(j, c);
      na += x.at(i, c) * x.at(i, c);
      nb += x.at(j, c) * x.at(j, c);
    }
    all.push_back({j, (na == 0 || nb == 0) ? 0.0 : d / (std::sqrt(na) * std::sqrt(nb))});
  }
  std::stable_sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.row < b.row;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace

TEST(Vectors, DotNormCosine) {
  const std::vector<double> a{3, 4}, b{4, 3}, z{0, 0};
  EXPECT_DOUBLE_EQ(dot(a, b), 24.0);
  EXPECT_DOUBLE_EQ(norm(a), 5.0);
  EXPECT_DOUBLE_EQ(cosine(a, b), 24.0 / 25.0);
  EXPECT_DOUBLE_EQ(cosine(a, a), 1.0);
  EXPECT_EQ(cosine(a, z), 0.0);
  EXPECT_EQ(cosine(z, z), 0.0);
}

TEST(ScoreCandidates, SerialAndParallelAgreeExactly) {
  for (std::size_t rows : {0u, 1u, 7u, 513u}) {
    const Matrix ans = random_matrix(rows, 64, rows + 1, false);
    std::vector<double> q(64);
    Rng rng = make_rng(rows, "q");
    for (double& v : q) v = uniform_real(rng);
    std::vector<double> a(rows), b(rows);
    kernels::serial::score_candidates(q, ans, a);
    for (int threads : {1, 3, 4}) {
      omp_set_num_threads(threads);
      kernels::omp::score_candidates(q, ans, b);
      EXPECT_EQ(a, b);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      double ref = 0;
      for (std::size_t c = 0; c < 64; ++c) ref += q[c] * ans.at(i, c);
      EXPECT_NEAR(a[i], ref, 1e-12);
    }
  }
}

TEST(KnnAllPairs, MatchesBruteForce) {
  const Matrix x = random_matrix(60, 16, 9, true);
  for (std::size_t k : {1u, 10u, 59u, 200u}) {
    const auto s = kernels::serial::knn_all_pairs(x, k);
    ASSERT_EQ(s.size(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto ref = brute_knn(x, i, k);
      ASSERT_EQ(s[i].size(), ref.size());
      for (std::size_t j = 0; j < ref.size(); ++j) {
        EXPECT_EQ(s[i][j].row, ref[j].row) << i << "," << j;
        EXPECT_NEAR(s[i][j].similarity, ref[j].similarity, 1e-12);
      }
    }
    for (int threads : {1, 4}) {
      omp_set_num_threads(threads);
      EXPECT_EQ(kernels::omp::knn_all_pairs(x, k), s);
    }
  }
}

TEST(KnnAllPairs, TiesBreakByRowIndex) {
  Matrix x(4, 2);
  x.at(0, 0) = 1;
  x.at(1, 0) = 2;
  x.at(2, 0) = 3;
  x.at(3, 1) = 1;
  const auto s = kernels::serial::knn_all_pairs(x, 3);
  EXPECT_EQ(s[0][0].row, 1u);
  EXPECT_EQ(s[0][1].row, 2u);
  EXPECT_EQ(s[0][2].row, 3u);
  EXPECT_EQ(s[0][2].similarity, 0.0);
  EXPECT_TRUE(kernels::serial::knn_all_pairs(Matrix(), 3).empty());
}
