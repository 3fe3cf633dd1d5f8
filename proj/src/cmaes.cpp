#include "growform/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace growform {

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const nlohmann::json &j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

CmaEs::CmaEs(const Eigen::VectorXd &mean, const CmaEsOptions &options, std::uint64_t seed)
    : opt_(options), rng_(seed), mean_(mean), sigma_(options.sigma) {
  const int n = static_cast<int>(mean.size());
  if (n < 1) throw std::invalid_argument("CmaEs: empty mean");
  if (opt_.lambda < 2) throw std::invalid_argument("CmaEs: lambda must be >= 2");
  if (opt_.mu < 1 || opt_.mu > opt_.lambda) throw std::invalid_argument("CmaEs: need 1 <= mu <= lambda");
  if (!(opt_.sigma > 0.0)) throw std::invalid_argument("CmaEs: sigma must be > 0");
  if (!(opt_.learning_rate > 0.0)) throw std::invalid_argument("CmaEs: learning rate must be > 0");

  // Log-rank recombination weights.
  weights_.resize(static_cast<std::size_t>(opt_.mu));
  for (int i = 0; i < opt_.mu; ++i) weights_[static_cast<std::size_t>(i)] = std::log(opt_.mu + 0.5) - std::log(i + 1.0);
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double sq = 0.0;
  for (auto &w : weights_) {
    w /= sum;
    sq += w * w;
  }
  mu_eff_ = 1.0 / sq;

  const double dn = n;
  c_sigma_ = (mu_eff_ + 2.0) / (dn + mu_eff_ + 5.0);
  d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (dn + 1.0)) - 1.0) + c_sigma_;
  c_c_ = (4.0 + mu_eff_ / dn) / (dn + 4.0 + 2.0 * mu_eff_ / dn);
  c_1_ = 2.0 / ((dn + 1.3) * (dn + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) / ((dn + 2.0) * (dn + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

  cov_ = Eigen::MatrixXd::Identity(n, n);
  path_sigma_ = Eigen::VectorXd::Zero(n);
  path_c_ = Eigen::VectorXd::Zero(n);
  decompose();
}

void CmaEs::decompose() {
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_);
  Eigen::VectorXd values = eig.eigenvalues();
  const double top = std::max(values.maxCoeff(), 1e-300);
  const double floor = top * 1e-14;
  bool repaired = !std::isfinite(values.sum());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(values[i] > floor)) {
      values[i] = floor;
      repaired = true;
    }
  basis_ = eig.eigenvectors();
  if (repaired) {
    ++repairs_;
    cov_ = basis_ * values.asDiagonal() * basis_.transpose();
  }
  scale_ = values.cwiseSqrt();
  inv_sqrt_ = basis_ * scale_.cwiseInverse().asDiagonal() * basis_.transpose();
}

const std::vector<Eigen::VectorXd> &CmaEs::ask() {
  const int n = dimension();
  population_.clear();
  for (int k = 0; k < opt_.lambda; ++k) {
    Eigen::VectorXd x;
    for (int attempt = 0;; ++attempt) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = rng_.normal();
      x = mean_ + sigma_ * (basis_ * (scale_.cwiseProduct(z)));
      bool inside = true;
      if (opt_.lower) inside = inside && (x.array() >= opt_.lower->array()).all();
      if (opt_.upper) inside = inside && (x.array() <= opt_.upper->array()).all();
      if (inside) break;
      if (attempt >= opt_.max_resamples) {
        if (opt_.lower) x = x.cwiseMax(*opt_.lower);
        if (opt_.upper) x = x.cwiseMin(*opt_.upper);
        break;
      }
    }
    population_.push_back(std::move(x));
  }
  return population_;
}

void CmaEs::tell(std::span<const double> values) {
  if (values.size() != population_.size()) throw std::invalid_argument("CmaEs::tell: size mismatch with ask()");
  const int n = dimension();
  const double eta = opt_.learning_rate;

  std::vector<double> v(values.begin(), values.end());
  for (auto &x : v)
    if (!std::isfinite(x)) x = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  const bool flat = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });

  Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd rank_mu = cov_;
  if (!flat) {
    rank_mu.setZero();
    for (int i = 0; i < opt_.mu; ++i) {
      const Eigen::VectorXd y = (population_[order[static_cast<std::size_t>(i)]] - mean_) / sigma_;
      const double w = weights_[static_cast<std::size_t>(i)];
      y_w += w * y;
      rank_mu += w * y * y.transpose();
    }
  }

  mean_ += eta * sigma_ * y_w;

  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ + std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * (inv_sqrt_ * y_w);
  const double ps_norm = path_sigma_.norm();
  const double gen_decay = 1.0 - std::pow(1.0 - c_sigma_, 2.0 * (generation_ + 1));
  const bool h_sigma = ps_norm / std::sqrt(gen_decay) < (1.4 + 2.0 / (n + 1.0)) * chi_n_;
  path_c_ = (1.0 - c_c_) * path_c_ + (h_sigma ? std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) : 0.0) * y_w;

  const double stall = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);
  const Eigen::MatrixXd rank_one = path_c_ * path_c_.transpose() + stall * cov_;
  cov_ += c_1_ * (rank_one - cov_) + c_mu_ * (rank_mu - cov_);

  sigma_ *= std::exp((c_sigma_ / d_sigma_) * (ps_norm / chi_n_ - 1.0));
  sigma_ = std::min(sigma_, opt_.sigma_max);
  if (!(std::isfinite(sigma_) && sigma_ > 0.0)) {
    sigma_ = opt_.sigma;
    ++repairs_;
  }

  ++generation_;
  decompose();
}

nlohmann::json CmaEs::save_state() const {
  nlohmann::json cov = nlohmann::json::array();
  for (Eigen::Index r = 0; r < cov_.rows(); ++r) cov.push_back(vec_to_json(cov_.row(r).transpose()));
  return {{"mean", vec_to_json(mean_)},     {"sigma", sigma_},          {"covariance", cov},
          {"path_sigma", vec_to_json(path_sigma_)}, {"path_c", vec_to_json(path_c_)},
          {"generation", generation_},      {"repairs", repairs_},      {"rng", rng_.serialize()}};
}

void CmaEs::load_state(const nlohmann::json &state) {
  mean_ = vec_from_json(state.at("mean"));
  sigma_ = state.at("sigma").get<double>();
  const auto &cov = state.at("covariance");
  const auto n = static_cast<Eigen::Index>(mean_.size());
  cov_.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) cov_.row(r) = vec_from_json(cov.at(static_cast<std::size_t>(r))).transpose();
  path_sigma_ = vec_from_json(state.at("path_sigma"));
  path_c_ = vec_from_json(state.at("path_c"));
  generation_ = state.at("generation").get<int>();
  repairs_ = state.at("repairs").get<int>();
  rng_.deserialize(state.at("rng").get<std::string>());
  decompose();
}

}  // namespace growform
