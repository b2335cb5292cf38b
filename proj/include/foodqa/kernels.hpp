#pragma once

// Dense kernels shared by the ranker and the food-log module. Each has a
// serial reference version and an OpenMP version that must agree exactly.

#include <cstddef>
#include <span>
#include <vector>

namespace foodqa {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
// 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::size_t row = 0;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

namespace kernels {

// out[i] = q . answers.row(i)
namespace serial {
void score_candidates(std::span<const double> q, const Matrix& answers, std::span<double> out);
// k nearest rows by cosine for every row, self excluded, sorted by
// similarity descending then row index ascending.
std::vector<std::vector<Neighbor>> knn_all_pairs(const Matrix& x, std::size_t k);
}  // namespace serial

namespace omp {
void score_candidates(std::span<const double> q, const Matrix& answers, std::span<double> out);
std::vector<std::vector<Neighbor>> knn_all_pairs(const Matrix& x, std::size_t k);
}  // namespace omp

}  // namespace kernels

}  // namespace foodqa
