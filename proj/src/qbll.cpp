#include "hmr/qbll.hpp"

#include <algorithm>
#include <cmath>

#include "hmr/errors.hpp"
#include "hmr/ols.hpp"
#include "hmr/rng.hpp"

namespace hmr {

double gaussian_kernel(double u) {
  return 0.3989422804014326779 * std::exp(-0.5 * u * u);
}

KernelWeights kernel_weights(int T, int s, double H, bool normalized) {
  if (T < 1) throw ConfigError("kernel_weights: T must be >= 1");
  if (s < 0 || s >= T) throw ConfigError("kernel_weights: s out of range");
  if (!(H > 0.0)) throw ConfigError("kernel_weights: H must be positive");
  Eigen::VectorXd w(T);
  for (int t = 0; t < T; ++t)
    w(t) = gaussian_kernel((static_cast<double>(t) - s) / H);
  KernelWeights kw;
  if (normalized) {
    w /= w.sum();
  }
  const double sum_sq = w.squaredNorm();
  if (!(sum_sq > 0.0)) throw NumericalError("kernel weights vanish");
  kw.zeta = 1.0 / sum_sq;
  kw.vartheta = kw.zeta * w;
  return kw;
}

NormalGammaPrior default_prior(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y) {
  const Eigen::Index k = X.cols();
  if (X.rows() < k + 2)
    throw InsufficientDataError("default_prior: need T >= k + 2");
  OlsFit fit = ols(X, y, false);
  NormalGammaPrior prior;
  prior.beta0 = fit.coef;
  prior.kappa0 = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mu = X.col(j).mean();
    const double var =
        (X.col(j).array() - mu).matrix().squaredNorm() /
        static_cast<double>(X.rows() - 1);
    prior.kappa0(j, j) = 0.01 * (var > 0.0 ? var : 1.0);
  }
  prior.alpha0 = 1.0;
  prior.gamma0 = fit.sigma2 > 0.0 ? fit.sigma2 : 1.0;
  return prior;
}

LocalPosterior local_posterior(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& vartheta,
                               const NormalGammaPrior& prior) {
  const Eigen::Index T = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != T || vartheta.size() != T)
    throw NumericalError("local_posterior: size mismatch");

  // weighted moments X'DX, X'Dy, y'Dy
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  double ydy = 0.0;
  double sum_theta = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const double th = vartheta(t);
    A.noalias() += th * X.row(t).transpose() * X.row(t);
    b.noalias() += (th * y(t)) * X.row(t).transpose();
    ydy += th * y(t) * y(t);
    sum_theta += th;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt_A(A);
  if (ldlt_A.info() != Eigen::Success ||
      ldlt_A.vectorD().minCoeff() <=
          A.diagonal().maxCoeff() * k * 1e-13) {
    throw RankError("local_posterior: weighted design is rank deficient");
  }

  LocalPosterior post;
  post.beta_hat = ldlt_A.solve(b);
  post.kappa_bar = prior.kappa0 + A;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_kbar(post.kappa_bar);
  if (ldlt_kbar.info() != Eigen::Success)
    throw RankError("local_posterior: kappa_bar not positive definite");
  post.beta_bar =
      ldlt_kbar.solve(A * post.beta_hat + prior.kappa0 * prior.beta0);
  post.alpha_bar = prior.alpha0 + sum_theta;
  post.gamma_bar =
      prior.gamma0 +
      0.5 * (ydy - post.beta_bar.dot(post.kappa_bar * post.beta_bar) +
             prior.beta0.dot(prior.kappa0 * prior.beta0));
  return post;
}

namespace {

// draws for one time point; returns kept draws as (I_kept x k)
Eigen::MatrixXd draw_one_point(const LocalPosterior& post,
                               const TvpOptions& opt, uint64_t stream) {
  const Eigen::Index k = post.beta_bar.size();
  const int burn = static_cast<int>(std::floor(opt.burn_frac * opt.iterations));
  const int kept = opt.iterations - burn;
  if (kept < 2) throw ConfigError("burn fraction leaves too few draws");

  Eigen::LLT<Eigen::MatrixXd> llt(post.kappa_bar);
  if (llt.info() != Eigen::Success)
    throw RankError("posterior precision not positive definite");
  const Eigen::MatrixXd Lt = llt.matrixL().transpose();

  std::mt19937_64 eng = substream(opt.seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Gamma(shape = alpha_bar, rate = gamma_bar)
  std::gamma_distribution<double> gamma(post.alpha_bar, 1.0 / post.gamma_bar);

  Eigen::MatrixXd draws(kept, k);
  Eigen::VectorXd z(k);
  for (int i = 0; i < opt.iterations; ++i) {
    const double lambda = gamma(eng);
    for (Eigen::Index j = 0; j < k; ++j) z(j) = normal(eng);
    if (i < burn) continue;
    const Eigen::VectorXd u =
        Lt.triangularView<Eigen::Upper>().solve(z) / std::sqrt(lambda);
    draws.row(i - burn) = (post.beta_bar + u).transpose();
  }
  return draws;
}

double quantile_sorted(std::vector<double>& v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = lo + 1 < v.size() ? lo + 1 : lo;
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

TvpSummary sample_tvp_impl(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const TvpOptions& opt,
                           const NormalGammaPrior* prior_in, bool parallel) {
  const Eigen::Index T = X.rows();
  const Eigen::Index k = X.cols();
  if (T < k + 2) throw InsufficientDataError("sample_tvp: series too short");
  const double H = opt.H > 0.0 ? opt.H : std::sqrt(static_cast<double>(T));
  const NormalGammaPrior prior =
      prior_in ? *prior_in : default_prior(X, y);

  TvpSummary sum;
  sum.mean.resize(T, k);
  sum.sd.resize(T, k);
  sum.q05.resize(T, k);
  sum.q95.resize(T, k);
  sum.H = H;
  sum.seed = opt.seed;

  const auto run_s = [&](Eigen::Index s) {
    const KernelWeights kw =
        kernel_weights(static_cast<int>(T), static_cast<int>(s), H,
                       opt.normalized_weights);
    const LocalPosterior post = local_posterior(X, y, kw.vartheta, prior);
    const Eigen::MatrixXd draws =
        draw_one_point(post, opt, static_cast<uint64_t>(s));
    const Eigen::Index n = draws.rows();
    for (Eigen::Index j = 0; j < k; ++j) {
      const double m = draws.col(j).mean();
      const double var =
          (draws.col(j).array() - m).matrix().squaredNorm() /
          static_cast<double>(n - 1);
      sum.mean(s, j) = m;
      sum.sd(s, j) = std::sqrt(var);
      std::vector<double> v(draws.col(j).data(), draws.col(j).data() + n);
      sum.q05(s, j) = quantile_sorted(v, 0.05);
      std::vector<double> v2(draws.col(j).data(), draws.col(j).data() + n);
      sum.q95(s, j) = quantile_sorted(v2, 0.95);
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index s = 0; s < T; ++s) run_s(s);
  } else {
    for (Eigen::Index s = 0; s < T; ++s) run_s(s);
  }
  return sum;
}

}  // namespace

TvpSummary sample_tvp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const TvpOptions& opt, const NormalGammaPrior* prior) {
  return sample_tvp_impl(X, y, opt, prior, true);
}

TvpSummary sample_tvp_serial(const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, const TvpOptions& opt,
                             const NormalGammaPrior* prior) {
  return sample_tvp_impl(X, y, opt, prior, false);
}

DynamicPremia dynamic_fama_macbeth(const ReturnPanel& panel,
                                   const FactorMatrix& factors,
                                   const TvpOptions& opt) {
  // align panel and factor dates (inner join)
  std::vector<size_t> prow, frow;
  {
    size_t pi = 0;
    for (size_t fi = 0; fi < factors.dates.size(); ++fi) {
      while (pi < panel.dates.size() && panel.dates[pi] < factors.dates[fi])
        ++pi;
      if (pi < panel.dates.size() && panel.dates[pi] == factors.dates[fi]) {
        prow.push_back(pi);
        frow.push_back(fi);
      }
    }
  }
  const size_t n = prow.size();
  const size_t K = factors.names.size();
  const size_t N = panel.assets.size();
  if (n < K + 5) throw InsufficientDataError("too few aligned dates");

  const size_t S = n - 1;  // predictive pairs (x_t, r_{t+1})
  const double H = opt.H > 0.0 ? opt.H : std::sqrt(static_cast<double>(S));

  Eigen::MatrixXd X(S, K + 1);
  for (size_t t = 0; t < S; ++t) {
    X(t, 0) = 1.0;
    for (size_t j = 0; j < K; ++j)
      X(t, j + 1) = factors.values.at(frow[t], j);
  }
  Eigen::MatrixXd R(S, N);  // responses r_{t+1,i}
  for (size_t t = 0; t < S; ++t)
    for (size_t i = 0; i < N; ++i)
      R(t, i) = panel.returns.at(prow[t + 1], i);

  // which assets have complete responses (these share the weighted Grams)
  std::vector<char> complete(N, 1);
  std::vector<int> good_count(N, 0);
  for (size_t i = 0; i < N; ++i) {
    for (size_t t = 0; t < S; ++t)
      if (std::isfinite(R(t, i))) ++good_count[i];
    complete[i] = good_count[i] == static_cast<int>(S);
  }
  std::vector<int> kept;
  for (size_t i = 0; i < N; ++i)
    if (good_count[i] >= static_cast<int>(K) + 3) kept.push_back(static_cast<int>(i));
  const size_t NA = kept.size();
  if (NA < K + 2)
    throw InsufficientDataError("too few assets for dynamic premia");

  // per-asset priors from full-sample OLS on the asset's usable rows
  std::vector<NormalGammaPrior> priors(NA);
  for (size_t a = 0; a < NA; ++a) {
    const int i = kept[a];
    if (complete[i]) {
      priors[a] = default_prior(X, R.col(i));
    } else {
      Eigen::MatrixXd Xi(good_count[i], K + 1);
      Eigen::VectorXd yi(good_count[i]);
      int r = 0;
      for (size_t t = 0; t < S; ++t) {
        if (!std::isfinite(R(t, i))) continue;
        Xi.row(r) = X.row(t);
        yi(r) = R(t, i);
        ++r;
      }
      priors[a] = default_prior(Xi, yi);
    }
  }

  // stage 1: local posterior-mean loadings per (s, asset); the weighted
  // design X'DX is shared across complete assets at each s
  std::vector<Eigen::MatrixXd> beta_bar(S);  // each NA x K (slopes)
  const long long SL = static_cast<long long>(S);
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < SL; ++s) {
    const KernelWeights kw = kernel_weights(
        static_cast<int>(S), static_cast<int>(s), H, opt.normalized_weights);
    const Eigen::VectorXd& th = kw.vartheta;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (size_t t = 0; t < S; ++t)
      A.noalias() += th(t) * X.row(t).transpose() * X.row(t);
    Eigen::LDLT<Eigen::MatrixXd> ldlt_A(A);
    const bool A_ok = ldlt_A.info() == Eigen::Success &&
                      ldlt_A.vectorD().minCoeff() >
                          A.diagonal().maxCoeff() * (K + 1) * 1e-13;

    Eigen::MatrixXd out(NA, K);
    out.setConstant(kNaN);
    for (size_t a = 0; a < NA; ++a) {
      const int i = kept[a];
      const NormalGammaPrior& prior = priors[a];
      if (complete[i]) {
        if (!A_ok) continue;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(K + 1);
        for (size_t t = 0; t < S; ++t)
          b.noalias() += (th(t) * R(t, i)) * X.row(t).transpose();
        const Eigen::VectorXd bh = ldlt_A.solve(b);
        Eigen::LDLT<Eigen::MatrixXd> kbar(prior.kappa0 + A);
        if (kbar.info() != Eigen::Success) continue;
        const Eigen::VectorXd bb =
            kbar.solve(A * bh + prior.kappa0 * prior.beta0);
        out.row(a) = bb.tail(K).transpose();
      } else {
        // masked rows: fall back to the generic posterior on usable rows
        Eigen::MatrixXd Ai = Eigen::MatrixXd::Zero(K + 1, K + 1);
        Eigen::VectorXd bi = Eigen::VectorXd::Zero(K + 1);
        for (size_t t = 0; t < S; ++t) {
          if (!std::isfinite(R(t, i))) continue;
          Ai.noalias() += th(t) * X.row(t).transpose() * X.row(t);
          bi.noalias() += (th(t) * R(t, i)) * X.row(t).transpose();
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt_Ai(Ai);
        if (ldlt_Ai.info() != Eigen::Success ||
            ldlt_Ai.vectorD().minCoeff() <=
                Ai.diagonal().maxCoeff() * (K + 1) * 1e-13)
          continue;
        const Eigen::VectorXd bh = ldlt_Ai.solve(bi);
        Eigen::LDLT<Eigen::MatrixXd> kbar(prior.kappa0 + Ai);
        if (kbar.info() != Eigen::Success) continue;
        const Eigen::VectorXd bb =
            kbar.solve(Ai * bh + prior.kappa0 * prior.beta0);
        out.row(a) = bb.tail(K).transpose();
      }
    }
    beta_bar[s] = std::move(out);
  }

  // stage 2: one cross-sectional regression per time point
  DynamicPremia dyn;
  dyn.names = factors.names;
  dyn.H = H;
  dyn.n_assets = static_cast<int>(NA);
  dyn.lambda_path.resize(S, K + 1);
  dyn.lambda_path.setConstant(kNaN);
  dyn.path_dates.resize(S);
  for (size_t s = 0; s < S; ++s) dyn.path_dates[s] = panel.dates[prow[s + 1]];

  for (size_t s = 0; s < S; ++s) {
    std::vector<int> rows;
    for (size_t a = 0; a < NA; ++a) {
      if (!std::isfinite(beta_bar[s](a, 0))) continue;
      if (!std::isfinite(R(s, kept[a]))) continue;
      rows.push_back(static_cast<int>(a));
    }
    if (rows.size() < K + 2) continue;
    Eigen::MatrixXd B(rows.size(), K + 1);
    Eigen::VectorXd r(rows.size());
    for (size_t q = 0; q < rows.size(); ++q) {
      B(q, 0) = 1.0;
      B.row(q).tail(K) = beta_bar[s].row(rows[q]);
      r(q) = R(s, kept[rows[q]]);
    }
    const Eigen::MatrixXd g = B.transpose() * B;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success ||
        ldlt.vectorD().minCoeff() <=
            g.diagonal().maxCoeff() * (K + 1) * 1e-13)
      continue;
    dyn.lambda_path.row(s) = ldlt.solve(B.transpose() * r).transpose();
  }

  // time-series means and t-stats over the defined periods
  dyn.lambda_bar.resize(K + 1);
  dyn.tstat.resize(K + 1);
  for (size_t j = 0; j <= K; ++j) {
    std::vector<double> vals;
    vals.reserve(S);
    for (size_t s = 0; s < S; ++s)
      if (std::isfinite(dyn.lambda_path(s, j)))
        vals.push_back(dyn.lambda_path(s, j));
    if (vals.size() < 2)
      throw InsufficientDataError("dynamic premia path is empty");
    Eigen::Map<Eigen::VectorXd> v(vals.data(), vals.size());
    const double mean = v.mean();
    dyn.lambda_bar(j) = mean;
    dyn.tstat(j) = mean / hac_se_of_mean(v, 0);
  }
  return dyn;
}

}  // namespace hmr
