#include "owrf/grow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "owrf/error.hpp"

namespace owrf {

void GrowConfig::validate(std::size_t p) const {
  if (q < 1 || q > p) throw InputError("q must satisfy 1 <= q <= p");
  if (min_node < 1) throw InputError("min_node must be >= 1");
  if (kind == TreeKind::Sut) {
    if (!prob_seq) throw InputError("SUT trees need a probability sequence");
    if (prob_seq->size() != p) throw DimensionError("probability sequence length must equal p");
    double total = 0.0;
    for (double v : *prob_seq) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("probabilities must be finite and >= 0");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InputError("probability sequence must sum to 1");
  }
}

std::size_t default_q(std::size_t p) { return std::max<std::size_t>(1, (p + 2) / 3); }

std::size_t default_min_node(TreeKind kind, std::size_t n) {
  if (kind == TreeKind::Sut) return 5;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(double(n)))));
}

namespace {

// Shared recursive grower. `Splitter` picks a split for the node or returns nullopt.
class Grower {
 public:
  Grower(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg, Rng& rng)
      : data_(data), cfg_(cfg), rng_(rng), counts_(sample.counts()) {
    if (sample.size() != data.rows()) throw DimensionError("bootstrap size differs from data rows");
    cfg.validate(data.cols());
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (counts_[i] > 0) rows_.push_back(static_cast<std::uint32_t>(i));
    }
  }

  RegressionTree run() {
    // Root goes in slot 0.
    nodes_.emplace_back();
    grow(0, 0, rows_.size());
    return RegressionTree(std::move(nodes_), std::move(members_), cfg_.kind);
  }

 private:
  struct Chosen {
    std::size_t feature;
    double cut;
    double decrease;
  };

  double weight(std::uint32_t row) const { return counts_[row]; }

  void grow(std::size_t at, std::size_t begin, std::size_t end) {
    double size = 0.0;
    for (std::size_t k = begin; k < end; ++k) size += weight(rows_[k]);

    std::optional<Chosen> split;
    if (!(size < double(cfg_.min_node))) {
      std::vector<std::size_t> varying = varying_features(begin, end);
      if (!varying.empty() && !constant_response(begin, end)) {
        split = cfg_.kind == TreeKind::Cart ? pick_cart(begin, end, varying)
                                            : pick_sut(begin, end, varying);
      }
    }
    if (!split) {
      make_leaf(at, begin, end, size);
      return;
    }

    const auto mid_it =
        std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                              rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t r) {
                                return data_.x(r, split->feature) < split->cut;
                              });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    if (mid == begin || mid == end) {
      make_leaf(at, begin, end, size);
      return;
    }

    const auto left = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    const auto right = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    TreeNode& node = nodes_[at];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.cut = split->cut;
    node.left = left;
    node.right = right;
    node.impurity_decrease = split->decrease;
    grow(static_cast<std::size_t>(left), begin, mid);
    grow(static_cast<std::size_t>(right), mid, end);
  }

  void make_leaf(std::size_t at, std::size_t begin, std::size_t end, double size) {
    std::sort(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
              rows_.begin() + static_cast<std::ptrdiff_t>(end));
    TreeNode& node = nodes_[at];
    node.member_begin = static_cast<std::uint32_t>(members_.size());
    double weighted = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t r = rows_[k];
      members_.push_back({r, counts_[r]});
      weighted += weight(r) * data_.y(r);
    }
    node.member_end = static_cast<std::uint32_t>(members_.size());
    node.size = size;
    node.mean = weighted / size;
  }

  std::vector<std::size_t> varying_features(std::size_t begin, std::size_t end) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < data_.cols(); ++j) {
      const double first = data_.x(rows_[begin], j);
      for (std::size_t k = begin + 1; k < end; ++k) {
        if (data_.x(rows_[k], j) != first) {
          out.push_back(j);
          break;
        }
      }
    }
    return out;
  }

  bool constant_response(std::size_t begin, std::size_t end) const {
    const double first = data_.y(rows_[begin]);
    for (std::size_t k = begin + 1; k < end; ++k) {
      if (data_.y(rows_[k]) != first) return false;
    }
    return true;
  }

  double node_sse(std::size_t begin, std::size_t end) const {
    double w = 0.0, s = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      w += weight(rows_[k]);
      s += weight(rows_[k]) * data_.y(rows_[k]);
    }
    const double mean = s / w;
    double sse = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double d = data_.y(rows_[k]) - mean;
      sse += weight(rows_[k]) * d * d;
    }
    return sse;
  }

  std::optional<Chosen> pick_cart(std::size_t begin, std::size_t end,
                                  std::vector<std::size_t> varying) {
    // q features uniformly without replacement, then scanned in index order so that
    // ties resolve to the lowest feature and lowest cut.
    if (varying.size() > cfg_.q) {
      std::shuffle(varying.begin(), varying.end(), rng_);
      varying.resize(cfg_.q);
    }
    std::sort(varying.begin(), varying.end());

    const double parent_sse = node_sse(begin, end);
    double total_w = 0.0, total_s = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      total_w += weight(rows_[k]);
      total_s += weight(rows_[k]) * data_.y(rows_[k]);
    }

    std::vector<std::uint32_t> order(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                     rows_.begin() + static_cast<std::ptrdiff_t>(end));
    std::optional<Chosen> best;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t j : varying) {
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double xa = data_.x(a, j), xb = data_.x(b, j);
        return xa < xb || (xa == xb && a < b);
      });
      double left_w = 0.0, left_s = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left_w += weight(order[k]);
        left_s += weight(order[k]) * data_.y(order[k]);
        const double lo = data_.x(order[k], j), hi = data_.x(order[k + 1], j);
        if (lo == hi) continue;
        const double right_w = total_w - left_w;
        const double right_s = total_s - left_s;
        // Minimising children SSE == maximising the between-group term.
        const double gain = left_s * left_s / left_w + right_s * right_s / right_w;
        if (gain > best_gain) {
          best_gain = gain;
          double cut = lo + (hi - lo) / 2.0;
          if (!(lo < cut)) cut = hi;
          best = Chosen{j, cut, 0.0};
        }
      }
    }
    if (best) {
      // Recompute the chosen children's SSE directly to record the impurity decrease.
      double lw = 0, ls = 0, rw = 0, rs = 0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t r = rows_[k];
        if (data_.x(r, best->feature) < best->cut) {
          lw += weight(r);
          ls += weight(r) * data_.y(r);
        } else {
          rw += weight(r);
          rs += weight(r) * data_.y(r);
        }
      }
      const double lm = ls / lw, rm = rs / rw;
      double children = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::uint32_t r = rows_[k];
        const double d = data_.y(r) - (data_.x(r, best->feature) < best->cut ? lm : rm);
        children += weight(r) * d * d;
      }
      best->decrease = std::max(0.0, parent_sse - children);
    }
    return best;
  }

  std::optional<Chosen> pick_sut(std::size_t begin, std::size_t end,
                                 const std::vector<std::size_t>& varying) {
    const std::vector<double>& probs = *cfg_.prob_seq;
    std::vector<std::size_t> pool;
    std::vector<double> mass;
    for (std::size_t j : varying) {
      if (probs[j] > 0.0) {
        pool.push_back(j);
        mass.push_back(probs[j]);
      }
    }
    // Weighted sampling without replacement: sequential draws from the renormalised remainder.
    std::vector<std::size_t> drawn;
    while (drawn.size() < cfg_.q && !pool.empty()) {
      std::discrete_distribution<std::size_t> pick(mass.begin(), mass.end());
      const std::size_t k = pick(rng_);
      drawn.push_back(pool[k]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
      mass.erase(mass.begin() + static_cast<std::ptrdiff_t>(k));
    }
    if (drawn.empty()) return std::nullopt;
    std::sort(drawn.begin(), drawn.end());

    const std::size_t count = end - begin;
    const auto p = static_cast<Eigen::Index>(data_.cols());
    Eigen::MatrixXd parent(static_cast<Eigen::Index>(count), p);
    Eigen::VectorXd parent_w(static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) {
      parent.row(static_cast<Eigen::Index>(k)) = data_.x().row(rows_[begin + k]);
      parent_w(static_cast<Eigen::Index>(k)) = weight(rows_[begin + k]);
    }
    const double parent_norm = scaled_frobenius_norm(parent, parent_w);

    std::optional<Chosen> best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j : drawn) {
      const auto col = static_cast<Eigen::Index>(j);
      const double lo = parent.col(col).minCoeff();
      const double hi = parent.col(col).maxCoeff();
      double cut = lo + (hi - lo) / 2.0;
      if (!(lo < cut)) cut = hi;

      std::vector<Eigen::Index> left_rows, right_rows;
      for (Eigen::Index k = 0; k < parent.rows(); ++k) {
        (parent(k, col) < cut ? left_rows : right_rows).push_back(k);
      }
      const Eigen::MatrixXd left = parent(left_rows, Eigen::all);
      const Eigen::MatrixXd right = parent(right_rows, Eigen::all);
      const Eigen::VectorXd left_w = parent_w(left_rows);
      const Eigen::VectorXd right_w = parent_w(right_rows);

      double score = -std::numeric_limits<double>::infinity();
      if (!left_rows.empty() && !right_rows.empty()) {
        if (parent_norm == 0.0) {
          score = 0.0;
        } else {
          const double np = parent_w.sum();
          score = (parent_norm - left_w.sum() / np * scaled_frobenius_norm(left, left_w) -
                   right_w.sum() / np * scaled_frobenius_norm(right, right_w)) /
                  parent_norm;
        }
      }
      if (score > best_score) {
        best_score = score;
        best = Chosen{j, cut, 0.0};
      }
    }
    if (best) best->decrease = std::max(0.0, node_sse(begin, end) - split_sse(begin, end, *best));
    return best;
  }

  double split_sse(std::size_t begin, std::size_t end, const Chosen& c) const {
    double lw = 0, ls = 0, rw = 0, rs = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t r = rows_[k];
      if (data_.x(r, c.feature) < c.cut) {
        lw += weight(r);
        ls += weight(r) * data_.y(r);
      } else {
        rw += weight(r);
        rs += weight(r) * data_.y(r);
      }
    }
    const double lm = lw > 0 ? ls / lw : 0.0, rm = rw > 0 ? rs / rw : 0.0;
    double sse = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::uint32_t r = rows_[k];
      const double d = data_.y(r) - (data_.x(r, c.feature) < c.cut ? lm : rm);
      sse += weight(r) * d * d;
    }
    return sse;
  }

  const Dataset& data_;
  const GrowConfig& cfg_;
  Rng& rng_;
  const std::vector<std::uint32_t>& counts_;
  std::vector<std::uint32_t> rows_;
  std::vector<TreeNode> nodes_;
  std::vector<LeafMember> members_;
};

}  // namespace

RegressionTree grow_cart(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                         Rng& rng) {
  if (cfg.kind != TreeKind::Cart) throw InputError("grow_cart called with a non-CART config");
  return Grower(data, sample, cfg, rng).run();
}

RegressionTree grow_sut(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                        Rng& rng) {
  if (cfg.kind != TreeKind::Sut) throw InputError("grow_sut called with a non-SUT config");
  return Grower(data, sample, cfg, rng).run();
}

RegressionTree grow_tree(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                         Rng& rng) {
  return cfg.kind == TreeKind::Cart ? grow_cart(data, sample, cfg, rng)
                                    : grow_sut(data, sample, cfg, rng);
}

double scaled_frobenius_norm(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights) {
  if (rows.rows() != weights.size()) throw DimensionError("row weights length mismatch");
  const double total = weights.sum();
  if (rows.rows() == 0 || total <= 1.0) return 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double mean = weights.dot(rows.col(j)) / total;
    const Eigen::ArrayXd centered = rows.col(j).array() - mean;
    const double ss = (weights.array() * centered.square()).sum();
    if (ss <= 0.0 || centered.abs().maxCoeff() == 0.0) continue;
    const double sd = std::sqrt(ss / (total - 1.0));
    sum_sq += (weights.array() * (centered / sd).square()).sum();
  }
  return std::sqrt(sum_sq);
}

double sut_score(const Eigen::MatrixXd& parent, const Eigen::VectorXd& parent_weights,
                 const Eigen::MatrixXd& left, const Eigen::VectorXd& left_weights,
                 const Eigen::MatrixXd& right, const Eigen::VectorXd& right_weights) {
  if (left.rows() == 0 || right.rows() == 0) return -std::numeric_limits<double>::infinity();
  if (parent.rows() == 0) throw InputError("sut_score: empty parent");
  const double parent_norm = scaled_frobenius_norm(parent, parent_weights);
  if (parent_norm == 0.0) return 0.0;
  const double np = parent_weights.sum();
  return (parent_norm - left_weights.sum() / np * scaled_frobenius_norm(left, left_weights) -
          right_weights.sum() / np * scaled_frobenius_norm(right, right_weights)) /
         parent_norm;
}

double sut_score(const Eigen::MatrixXd& parent, const Eigen::MatrixXd& left,
                 const Eigen::MatrixXd& right) {
  return sut_score(parent, Eigen::VectorXd::Ones(parent.rows()), left,
                   Eigen::VectorXd::Ones(left.rows()), right, Eigen::VectorXd::Ones(right.rows()));
}

}  // namespace owrf
