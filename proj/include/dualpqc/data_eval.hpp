#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dualpqc::data {

/// Rows are samples: nonnegative energy fractions per depth bin, each row
/// summing to 1.
using DatasetMatrix = Eigen::MatrixXd;

/// Throws ValidationError unless every row is a probability vector
/// (entries >= 0, sum within 1e-9 of 1).
void validate_dataset(const DatasetMatrix& data);

/// Synthetic longitudinal-profile samples: shape t^(alpha-1)*exp(-beta*t)
/// integrated over 4 equal bins of t in [0,8], one (alpha, beta) draw per
/// sample with alpha ~ U[2.0, 4.5] and beta ~ U[0.9, 1.6], rows normalized.
DatasetMatrix gen_synthetic_dataset(std::size_t n_samples, std::uint64_t seed);

/// Comma-separated rows of `expected_width` nonnegative energies, one sample
/// per line; '#' lines and blank lines are skipped; rows are normalized to
/// sum 1. Malformed content names the offending line.
DatasetMatrix load_dataset(const std::filesystem::path& path, int expected_width);

/// Writes the documented dataset format (full double precision).
void save_dataset(const std::filesystem::path& path, const DatasetMatrix& data);

struct ClusterResult {
  std::vector<int> assignments;   // per-row cluster id
  Eigen::MatrixXd means;          // k x width, arithmetic average of members
  std::vector<double> objective;  // within-cluster sum of squares per iteration
  int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding and Euclidean distance.
/// Deterministic given the seed: argmin ties go to the lowest cluster index,
/// and a cluster left empty by an assignment pass is reseeded at the point
/// farthest from its current centroid.
ClusterResult kmeans(const DatasetMatrix& data, int k, std::uint64_t seed,
                     int max_iters = 200);

/// KL divergence sum_j p_j log(p_j / q_j) with both inputs floored at 1e-12
/// and renormalized. Zero for identical inputs, nonnegative always.
double relative_entropy(std::span<const double> p, std::span<const double> q);

struct BijectionResult {
  std::vector<int> image_to_cluster;  // image i is paired with this cluster
  std::vector<double> pair_kl;        // KL(cluster mean || image) per image
  double total_kl = 0.0;
};

/// Brute-force search over all pairings of generated images with cluster
/// means, minimizing the total KL(cluster mean || image).
BijectionResult match_bijection(const std::vector<std::vector<double>>& images,
                                const Eigen::MatrixXd& cluster_means);

}  // namespace dualpqc::data
