// Copyright 2026 The fedchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedchaos/tensor.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fedchaos/error.h"

namespace fedchaos {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    Fail(ErrorCode::kDimension, "tensor data length " +
                                    std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) +
                                    "x" + std::to_string(cols));
  }
}

Tensor2 Tensor2::SelectRows(std::span<const std::size_t> indices) const {
  Tensor2 out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) {
      Fail(ErrorCode::kDimension, "row index out of range");
    }
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Tensor2 Tensor2::DropColumn(std::size_t col) const {
  if (col >= cols_) Fail(ErrorCode::kDimension, "column index out of range");
  Tensor2 out(rows_, cols_ - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r);
    auto dst = out.row(r);
    std::copy(src.begin(), src.begin() + col, dst.begin());
    std::copy(src.begin() + col + 1, src.end(), dst.begin() + col);
  }
  return out;
}

Tensor2 Tensor2::InsertColumn(std::size_t col, double value) const {
  if (col > cols_) Fail(ErrorCode::kDimension, "column index out of range");
  Tensor2 out(rows_, cols_ + 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto src = row(r);
    auto dst = out.row(r);
    std::copy(src.begin(), src.begin() + col, dst.begin());
    dst[col] = value;
    std::copy(src.begin() + col, src.end(), dst.begin() + col + 1);
  }
  return out;
}

bool Tensor2::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace fedchaos
