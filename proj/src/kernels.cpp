#include "foodqa/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace foodqa {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

namespace {

Matrix unit_rows(const Matrix& x) {
  Matrix u = x;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    const double n = norm(x.row(r));
    if (n == 0.0) continue;
    for (double& v : u.row(r)) v /= n;
  }
  return u;
}

bool closer(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.row < b.row;
}

std::vector<Neighbor> neighbors_of(const Matrix& u, std::size_t i, std::size_t k) {
  std::vector<Neighbor> all;
  all.reserve(u.rows());
  for (std::size_t j = 0; j < u.rows(); ++j) {
    if (j != i) all.push_back({j, dot(u.row(i), u.row(j))});
  }
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(k), all.end(), closer);
  all.resize(k);
  return all;
}

void check_dims(std::span<const double> q, const Matrix& answers, std::span<double> out) {
  if (answers.rows() > 0 && q.size() != answers.cols()) {
    throw std::invalid_argument("score_candidates: dimension mismatch");
  }
  if (out.size() != answers.rows()) throw std::invalid_argument("score_candidates: bad output size");
}

}  // namespace

namespace kernels {

namespace serial {

void score_candidates(std::span<const double> q, const Matrix& answers, std::span<double> out) {
  check_dims(q, answers, out);
  for (std::size_t i = 0; i < answers.rows(); ++i) out[i] = dot(q, answers.row(i));
}

std::vector<std::vector<Neighbor>> knn_all_pairs(const Matrix& x, std::size_t k) {
  const Matrix u = unit_rows(x);
  std::vector<std::vector<Neighbor>> out(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) out[i] = neighbors_of(u, i, k);
  return out;
}

}  // namespace serial

namespace omp {

void score_candidates(std::span<const double> q, const Matrix& answers, std::span<double> out) {
  check_dims(q, answers, out);
  const long n = static_cast<long>(answers.rows());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = dot(q, answers.row(static_cast<std::size_t>(i)));
}

std::vector<std::vector<Neighbor>> knn_all_pairs(const Matrix& x, std::size_t k) {
  const Matrix u = unit_rows(x);
  std::vector<std::vector<Neighbor>> out(u.rows());
  const long n = static_cast<long>(u.rows());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) out[i] = neighbors_of(u, static_cast<std::size_t>(i), k);
  return out;
}

}  // namespace omp

}  // namespace kernels

}  // namespace foodqa
