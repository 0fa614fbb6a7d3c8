// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qfl/common/error.hpp"

namespace qfl::data {

namespace {
constexpr double kMinStd = 1e-12;
}

StandardScaler StandardScaler::fit(const Eigen::MatrixXd& x) {
  if (x.rows() == 0) throw ConfigError("cannot fit a scaler on zero rows");
  StandardScaler s;
  s.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - s.mean.transpose();
  s.std = (centered.array().square().colwise().sum() / static_cast<double>(x.rows())).sqrt();
  return s;
}

Eigen::MatrixXd StandardScaler::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) throw ShapeError("scaler input width mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    if (std[c] < kMinStd) {
      out.col(c).setZero();
    } else {
      out.col(c) = (x.col(c).array() - mean[c]) / std[c];
    }
  }
  return out;
}

std::pair<Eigen::MatrixXd, StandardScaler> standard_scale(const Eigen::MatrixXd& x) {
  auto s = StandardScaler::fit(x);
  return {s.transform(x), std::move(s)};
}

OneHotEncoder OneHotEncoder::fit(const TabularDataset& data, std::span<const std::size_t> rows) {
  OneHotEncoder enc;
  enc.input_width = data.dim();
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    const auto& info = data.columns[c];
    if (!info.categorical) continue;
    std::set<std::string> seen;
    for (std::size_t r : rows) {
      const auto code = static_cast<std::size_t>(data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      if (code >= info.categories.size()) throw DataError("category code out of range in " + info.name);
      seen.insert(info.categories[code]);
    }
    enc.columns.push_back({c, std::vector<std::string>(seen.begin(), seen.end())});
  }
  return enc;
}

int OneHotEncoder::output_width() const {
  int w = input_width;
  for (const auto& col : columns) w += static_cast<int>(col.vocab.size()) - 1;
  return w;
}

Eigen::MatrixXd OneHotEncoder::transform(const TabularDataset& data) const {
  if (data.dim() != input_width) throw ShapeError("one-hot input width mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(data.features.rows(), output_width());
  Eigen::Index dst = 0;
  std::size_t next_cat = 0;
  for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
    if (next_cat < columns.size() && columns[next_cat].source == static_cast<std::size_t>(c)) {
      const auto& col = columns[next_cat++];
      const auto& cats = data.columns[static_cast<std::size_t>(c)].categories;
      for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
        const auto code = static_cast<std::size_t>(data.features(r, c));
        if (code >= cats.size()) continue;
        auto it = std::lower_bound(col.vocab.begin(), col.vocab.end(), cats[code]);
        if (it != col.vocab.end() && *it == cats[code]) out(r, dst + (it - col.vocab.begin())) = 1.0;
      }
      dst += static_cast<Eigen::Index>(col.vocab.size());
    } else {
      out.col(dst++) = data.features.col(c);
    }
  }
  return out;
}

std::vector<std::string> OneHotEncoder::output_names(const TabularDataset& data) const {
  std::vector<std::string> names;
  std::size_t next_cat = 0;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (next_cat < columns.size() && columns[next_cat].source == c) {
      for (const auto& v : columns[next_cat].vocab) names.push_back(data.columns[c].name + "=" + v);
      ++next_cat;
    } else {
      names.push_back(data.columns[c].name);
    }
  }
  return names;
}

std::vector<std::size_t> undersample_indices(std::span<const int> labels, Rng& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw ConfigError("under-sampling needs both classes present");
  auto& major = pos.size() > neg.size() ? pos : neg;
  const auto& minor = pos.size() > neg.size() ? neg : pos;
  for (std::size_t i = 0; i < minor.size(); ++i) std::swap(major[i], major[i + uniform_index(rng, major.size() - i)]);
  major.resize(minor.size());
  std::vector<std::size_t> keep(minor.begin(), minor.end());
  keep.insert(keep.end(), major.begin(), major.end());
  std::sort(keep.begin(), keep.end());
  return keep;
}

TabularDataset undersample(const TabularDataset& data, Rng& rng) {
  const auto keep = undersample_indices(data.labels, rng);
  return data.select_rows(keep);
}

}  // namespace qfl::data
