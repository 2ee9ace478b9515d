#include "dualpqc/data_eval.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "dualpqc/errors.hpp"
#include "dualpqc/rng.hpp"

namespace dualpqc::data {

namespace {

constexpr double kKlFloor = 1e-12;

double squared_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return (a - b).squaredNorm();
}

}  // namespace

void validate_dataset(const DatasetMatrix& data) {
  if (data.rows() == 0 || data.cols() == 0) {
    throw ValidationError("dataset is empty");
  }
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    if ((data.row(r).array() < 0.0).any()) {
      throw ValidationError("dataset row " + std::to_string(r) +
                            " has a negative entry");
    }
    if (std::abs(data.row(r).sum() - 1.0) > 1e-9) {
      throw ValidationError("dataset row " + std::to_string(r) +
                            " is not normalized");
    }
  }
}

DatasetMatrix gen_synthetic_dataset(std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("gen_synthetic_dataset: n_samples >= 1");
  constexpr int kBins = 4;
  constexpr double kDepthMax = 8.0;
  Rng rng(seed);
  DatasetMatrix out(n_samples, kBins);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double alpha = rng.uniform(2.0, 4.5);
    const double beta = rng.uniform(0.9, 1.6);
    // Bin mass ~ P(alpha, beta*t_hi) - P(alpha, beta*t_lo); the common
    // Gamma(alpha)/beta^alpha factor cancels in the normalization.
    double total = 0.0;
    for (int b = 0; b < kBins; ++b) {
      const double lo = kDepthMax * b / kBins;
      const double hi = kDepthMax * (b + 1) / kBins;
      const double mass = boost::math::gamma_p(alpha, beta * hi) -
                          boost::math::gamma_p(alpha, beta * lo);
      out(s, b) = mass;
      total += mass;
    }
    out.row(s) /= total;
  }
  return out;
}

DatasetMatrix load_dataset(const std::filesystem::path& path, int expected_width) {
  if (expected_width < 1) throw ValidationError("load_dataset: width must be >= 1");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    while (std::getline(ss, token, ',')) {
      std::size_t pos = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &pos);
      } catch (const std::exception&) {
        throw ValidationError("dataset line " + std::to_string(line_no) +
                              ": non-numeric token '" + token + "'");
      }
      while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) {
        ++pos;
      }
      if (pos != token.size()) {
        throw ValidationError("dataset line " + std::to_string(line_no) +
                              ": non-numeric token '" + token + "'");
      }
      if (!std::isfinite(value)) {
        throw ValidationError("dataset line " + std::to_string(line_no) +
                              ": non-finite value");
      }
      if (value < 0.0) {
        throw ValidationError("dataset line " + std::to_string(line_no) +
                              ": negative energy " + token);
      }
      row.push_back(value);
    }
    if (static_cast<int>(row.size()) != expected_width) {
      throw ValidationError("dataset line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_width) + " values, got " +
                            std::to_string(row.size()));
    }
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    if (sum <= 0.0) {
      throw ValidationError("dataset line " + std::to_string(line_no) +
                            ": row sums to zero");
    }
    for (double& v : row) v /= sum;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("dataset file has no data rows: " + path.string());

  DatasetMatrix out(rows.size(), expected_width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < expected_width; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

void save_dataset(const std::filesystem::path& path, const DatasetMatrix& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "# rows: " << data.rows() << ", columns: " << data.cols()
      << ", normalized energy fractions\n";
  char buf[32];
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data(r, c));
      out << buf << (c + 1 < data.cols() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ClusterResult kmeans(const DatasetMatrix& data, int k, std::uint64_t seed,
                     int max_iters) {
  const Eigen::Index n = data.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n) {
    throw ValidationError("kmeans: need 1 <= k <= n_samples");
  }
  Rng rng(seed);

  // k-means++ seeding
  Eigen::MatrixXd centroids(k, data.cols());
  centroids.row(0) = data.row(static_cast<Eigen::Index>(rng.below(n)));
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j) {
        best = std::min(best, squared_distance(data.row(r), centroids.row(j)));
      }
      d2[r] = best;
      total += best;
    }
    if (total <= 0.0) {
      centroids.row(c) = data.row(static_cast<Eigen::Index>(rng.below(n)));
      continue;
    }
    double target = rng.uniform() * total;
    Eigen::Index pick = n - 1;
    for (Eigen::Index r = 0; r < n; ++r) {
      target -= d2[r];
      if (target <= 0.0) {
        pick = r;
        break;
      }
    }
    centroids.row(c) = data.row(pick);
  }

  ClusterResult result;
  result.assignments.assign(n, -1);
  std::vector<int> previous(n, -1);

  for (int iter = 0; iter < max_iters; ++iter) {
    // assignment pass; ties to the lowest cluster index
    double wcss = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      int best = 0;
      double best_d = squared_distance(data.row(r), centroids.row(0));
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(data.row(r), centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      result.assignments[r] = best;
      wcss += best_d;
    }
    result.objective.push_back(wcss);
    result.iterations = iter + 1;

    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index r = 0; r < n; ++r) counts[result.assignments[r]]++;

    // empty cluster: reseed at the point farthest from its centroid
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double d =
            squared_distance(data.row(r), centroids.row(result.assignments[r]));
        if (d > far_d) {
          far_d = d;
          far = r;
        }
      }
      centroids.row(c) = data.row(far);
      reseeded = true;
    }
    if (reseeded) continue;

    if (result.assignments == previous) break;
    previous = result.assignments;

    centroids.setZero();
    for (Eigen::Index r = 0; r < n; ++r) {
      centroids.row(result.assignments[r]) += data.row(r);
    }
    for (int c = 0; c < k; ++c) centroids.row(c) /= static_cast<double>(counts[c]);
  }

  result.means = centroids;
  return result;
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ValidationError("relative_entropy: length mismatch");
  }
  if (p.empty()) throw ValidationError("relative_entropy: empty input");
  std::vector<double> pf(p.begin(), p.end());
  std::vector<double> qf(q.begin(), q.end());
  double ps = 0.0, qs = 0.0;
  for (std::size_t i = 0; i < pf.size(); ++i) {
    pf[i] = std::max(pf[i], kKlFloor);
    qf[i] = std::max(qf[i], kKlFloor);
    ps += pf[i];
    qs += qf[i];
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < pf.size(); ++i) {
    kl += (pf[i] / ps) * std::log((pf[i] / ps) / (qf[i] / qs));
  }
  return kl;
}

BijectionResult match_bijection(const std::vector<std::vector<double>>& images,
                                const Eigen::MatrixXd& cluster_means) {
  const int k = static_cast<int>(images.size());
  if (k == 0 || cluster_means.rows() != k) {
    throw ValidationError("match_bijection: need as many images as cluster means");
  }

  // all pairwise KLs up front
  Eigen::MatrixXd kl(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      std::vector<double> mean(cluster_means.row(j).begin(), cluster_means.row(j).end());
      kl(i, j) = relative_entropy(mean, images[i]);
    }
  }

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < k; ++i) total += kl(i, perm[i]);
    if (total < best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  BijectionResult result;
  result.image_to_cluster = best;
  result.total_kl = best_total;
  for (int i = 0; i < k; ++i) result.pair_kl.push_back(kl(i, best[i]));
  return result;
}

}  // namespace dualpqc::data
