#include "gcfx/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <vector>

#include <json.hpp>

namespace gcfx {
namespace {

constexpr char kMagic[8] = {'G', 'C', 'F', 'X', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

using nlohmann::json;

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in, const std::string& path) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw Error(ErrorKind::format, "checkpoint", path + ": truncated file");
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in, const std::string& path) {
  const std::uint64_t len = read_u64(in, path);
  if (len > (1ull << 32))
    throw Error(ErrorKind::format, "checkpoint",
                path + ": implausible string length");
  std::string s(len, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(len)))
    throw Error(ErrorKind::format, "checkpoint", path + ": truncated file");
  return s;
}

json config_to_json(const TrainConfig& c) {
  return json{
      {"model",
       {{"d_in", c.model.d_in},
        {"d_hidden", c.model.d_hidden},
        {"d_latent", c.model.d_latent},
        {"d_dec", c.model.d_dec},
        {"n_layers", c.model.n_layers},
        {"accum_iters", c.model.accum_iters},
        {"soft_mask_tau", c.model.soft_mask_tau},
        {"mask_mode", mask_mode_name(c.model.mask_mode)},
        {"reg_mode", reg_mode_name(c.model.reg_mode)}}},
      {"beta", c.beta},
      {"gamma", c.gamma},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"seed", c.seed},
      {"threads", c.threads}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  const json& m = j.at("model");
  c.model.d_in = m.at("d_in").get<int>();
  c.model.d_hidden = m.at("d_hidden").get<int>();
  c.model.d_latent = m.at("d_latent").get<int>();
  c.model.d_dec = m.at("d_dec").get<int>();
  c.model.n_layers = m.at("n_layers").get<int>();
  c.model.accum_iters = m.at("accum_iters").get<int>();
  c.model.soft_mask_tau = m.at("soft_mask_tau").get<double>();
  c.model.mask_mode = mask_mode_from_name(m.at("mask_mode").get<std::string>());
  c.model.reg_mode = reg_mode_from_name(m.at("reg_mode").get<std::string>());
  c.beta = j.at("beta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<int>();
  return c;
}

json featurization_to_json(const FeaturizeInfo& f) {
  json vocab = json::array();
  for (const auto& [label, col] : f.label_to_column)
    vocab.push_back({label, col});
  return json{{"mode", feature_mode_name(f.mode)},
              {"d_in", f.d_in},
              {"degree_cap", f.degree_cap},
              {"label_vocab", vocab}};
}

FeaturizeInfo featurization_from_json(const json& j) {
  FeaturizeInfo f;
  f.mode = feature_mode_from_name(j.at("mode").get<std::string>());
  f.d_in = j.at("d_in").get<int>();
  f.degree_cap = j.at("degree_cap").get<int>();
  for (const auto& pair : j.at("label_vocab"))
    f.label_to_column[pair.at(0).get<int>()] = pair.at(1).get<int>();
  return f;
}

json loss_to_json(const LossParts& p) {
  return json{{"total", p.total},
              {"l_agg", p.l_agg},
              {"l_c_prior", p.l_c_prior},
              {"l_l_prior", p.l_l_prior},
              {"l_reg", p.l_reg}};
}

LossParts loss_from_json(const json& j) {
  LossParts p;
  p.total = j.at("total").get<double>();
  p.l_agg = j.at("l_agg").get<double>();
  p.l_c_prior = j.at("l_c_prior").get<double>();
  p.l_l_prior = j.at("l_l_prior").get<double>();
  p.l_reg = j.at("l_reg").get<double>();
  return p;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  check_params(ckpt.params, ckpt.config.model);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io, "checkpoint", "cannot write " + path);

  out.write(kMagic, sizeof kMagic);
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);

  json meta{{"config", config_to_json(ckpt.config)},
            {"featurization", featurization_to_json(ckpt.featurization)},
            {"epoch", ckpt.epoch},
            {"last_loss", loss_to_json(ckpt.last_loss)},
            {"provenance", ckpt.provenance}};
  write_string(out, meta.dump());

  std::uint64_t count = 0;
  visit_params(ckpt.params,
               [&](const std::string&, const Mat&) { ++count; });
  write_u64(out, count);
  visit_params(ckpt.params, [&](const std::string& name, const Mat& m) {
    write_string(out, name);
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = m(r, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
  });
  if (!out)
    throw Error(ErrorKind::io, "checkpoint", "write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io, "checkpoint", "cannot open " + path);

  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::format, "checkpoint",
                path + ": not a checkpoint file");
  std::uint32_t version = 0;
  if (!in.read(reinterpret_cast<char*>(&version), sizeof version) ||
      version != kVersion)
    throw Error(ErrorKind::format, "checkpoint",
                path + ": unsupported version " + std::to_string(version));

  Checkpoint ckpt;
  json meta;
  try {
    meta = json::parse(read_string(in, path));
    ckpt.config = config_from_json(meta.at("config"));
    ckpt.featurization = featurization_from_json(meta.at("featurization"));
    ckpt.epoch = meta.at("epoch").get<int>();
    ckpt.last_loss = loss_from_json(meta.at("last_loss"));
    ckpt.provenance = meta.at("provenance").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, "checkpoint",
                path + ": bad metadata: " + e.what());
  }

  std::map<std::string, Mat> tensors;
  const std::uint64_t count = read_u64(in, path);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string name = read_string(in, path);
    const auto rows = static_cast<Eigen::Index>(read_u64(in, path));
    const auto cols = static_cast<Eigen::Index>(read_u64(in, path));
    if (rows < 0 || cols < 0 || rows * cols > (1ll << 28))
      throw Error(ErrorKind::format, "checkpoint",
                  path + ": implausible tensor shape for " + name);
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        double v = 0;
        if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
          throw Error(ErrorKind::format, "checkpoint",
                      path + ": truncated tensor " + name);
        m(r, c) = v;
      }
    tensors.emplace(name, std::move(m));
  }

  ckpt.params = init_params(ckpt.config.model, 0);
  visit_params(ckpt.params, [&](const std::string& name, Mat& m) {
    const auto it = tensors.find(name);
    if (it == tensors.end())
      throw Error(ErrorKind::format, "checkpoint",
                  path + ": missing tensor " + name);
    if (it->second.rows() != m.rows() || it->second.cols() != m.cols())
      throw Error(ErrorKind::format, "checkpoint",
                  path + ": tensor " + name + " has unexpected shape");
    m = it->second;
    tensors.erase(it);
  });
  if (!tensors.empty())
    throw Error(ErrorKind::format, "checkpoint",
                path + ": unknown tensor " + tensors.begin()->first);
  return ckpt;
}

}  // namespace gcfx
