#include "nlspike/ensemble.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace nlspike {

namespace {

constexpr char kMagic[8] = {'N', 'L', 'S', 'P', 'I', 'K', 'E', '1'};

template <class T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("load_instance: truncated file");
}

PlantedInstance sample_impl(const Channel& channel, const DiscretePrior* prior, int n,
                            std::uint64_t seed, double beta) {
  if (n < 2) throw std::invalid_argument("make_instance: n must be >= 2");
  PlantedInstance inst;
  inst.n = n;
  inst.beta = beta;
  inst.seed = seed;
  inst.channel = channel;
  inst.x = Eigen::VectorXd::Zero(n);
  Rng rng(seed);
  if (prior != nullptr)
    for (int i = 0; i < n; ++i) inst.x[i] = prior->sample(rng);
  double scale = std::pow(static_cast<double>(n), beta - 0.5);
  inst.y.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double w = scale * inst.x[i] * inst.x[j];
      double y = channel.sample(w, rng);
      inst.y(i, j) = y;
      inst.y(j, i) = y;
    }
  }
  return inst;
}

}  // namespace

PlantedInstance make_instance(const Channel& channel, const DiscretePrior& prior, int n,
                              std::uint64_t seed, double beta) {
  if (beta < 0.0) beta = beta_critical(channel.kf);
  return sample_impl(channel, &prior, n, seed, beta);
}

PlantedInstance make_null_instance(const Channel& channel, int n, std::uint64_t seed) {
  return sample_impl(channel, nullptr, n, seed, beta_critical(channel.kf));
}

Eigen::MatrixXd score_matrix(const PlantedInstance& inst, int k) {
  Eigen::MatrixXd s(inst.n, inst.n);
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i; j < inst.n; ++j) {
      double v = inst.channel.score(inst.y(i, j), k);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

double matrix_mse(const Eigen::VectorXd& target, const Eigen::VectorXd& estimate) {
  double t2 = target.squaredNorm();
  double e2 = estimate.squaredNorm();
  double dot = target.dot(estimate);
  if (t2 == 0.0) throw std::invalid_argument("matrix_mse: zero target");
  return (t2 * t2 + e2 * e2 - 2.0 * dot * dot) / (t2 * t2);
}

double normalized_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(a.dot(b)) / (na * nb);
}

void save_instance(const PlantedInstance& inst, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_instance: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod(os, static_cast<std::uint64_t>(inst.n));
  write_pod(os, inst.beta);
  write_pod(os, inst.seed);
  std::uint32_t name_len = static_cast<std::uint32_t>(inst.channel.name.size());
  write_pod(os, name_len);
  os.write(inst.channel.name.data(), name_len);
  std::uint32_t n_params = static_cast<std::uint32_t>(inst.channel.params.size());
  write_pod(os, n_params);
  for (const auto& [key, value] : inst.channel.params) {
    std::uint32_t klen = static_cast<std::uint32_t>(key.size());
    write_pod(os, klen);
    os.write(key.data(), klen);
    write_pod(os, value);
  }
  os.write(reinterpret_cast<const char*>(inst.x.data()),
           static_cast<std::streamsize>(sizeof(double)) * inst.n);
  std::vector<double> row(inst.n);  // y is column-major; pack each row explicitly
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i; j < inst.n; ++j) row[j - i] = inst.y(i, j);
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(sizeof(double)) * (inst.n - i));
  }
  if (!os) throw std::runtime_error("save_instance: write failed for " + path);
}

PlantedInstance load_instance(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_instance: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_instance: bad magic in " + path);
  std::uint64_t n64;
  PlantedInstance inst;
  read_pod(is, n64);
  read_pod(is, inst.beta);
  read_pod(is, inst.seed);
  inst.n = static_cast<int>(n64);
  std::uint32_t name_len;
  read_pod(is, name_len);
  std::string name(name_len, '\0');
  is.read(name.data(), name_len);
  std::uint32_t n_params;
  read_pod(is, n_params);
  std::map<std::string, double> params;
  for (std::uint32_t p = 0; p < n_params; ++p) {
    std::uint32_t klen;
    read_pod(is, klen);
    std::string key(klen, '\0');
    is.read(key.data(), klen);
    double value;
    read_pod(is, value);
    params[key] = value;
  }
  inst.channel = make_channel(name, params);
  inst.x.resize(inst.n);
  is.read(reinterpret_cast<char*>(inst.x.data()),
          static_cast<std::streamsize>(sizeof(double)) * inst.n);
  inst.y.resize(inst.n, inst.n);
  std::vector<double> row(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(double)) * (inst.n - i));
    for (int j = i; j < inst.n; ++j) {
      inst.y(i, j) = row[j - i];
      inst.y(j, i) = row[j - i];
    }
  }
  if (!is) throw std::runtime_error("load_instance: truncated file " + path);
  return inst;
}

}  // namespace nlspike
