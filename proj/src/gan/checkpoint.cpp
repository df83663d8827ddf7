/* Copyright 2026 The clinaug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "clinaug/gan.hpp"

#include "clinaug/errors.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace clinaug {

namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing checkpoint file '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void save_checkpoint(const fs::path& dir, const GanCheckpoint& ckpt, const nlohmann::json& extra) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create checkpoint directory '" + dir.string() + "'");
  write_bytes(dir / "generator.pt", ckpt.generator_state);
  write_bytes(dir / "critic.pt", ckpt.critic_state);
  write_bytes(dir / "generator_optim.pt", ckpt.generator_optim_state);
  write_bytes(dir / "critic_optim.pt", ckpt.critic_optim_state);
  write_bytes(dir / "rng_torch.bin", ckpt.torch_rng_state);
  write_bytes(dir / "rng_data.txt", ckpt.data_rng_state);

  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : ckpt.fid_history) {
    history.push_back({{"epoch", r.epoch}, {"fid", r.fid}, {"n_real", r.n_real}, {"n_fake", r.n_fake}});
  }
  nlohmann::json manifest = extra.is_object() ? extra : nlohmann::json::object();
  manifest["epoch"] = ckpt.epoch;
  manifest["generator_steps"] = ckpt.generator_steps;
  manifest["critic_steps"] = ckpt.critic_steps;
  manifest["fid_history"] = history;
  manifest["config"] = to_json(ckpt.config);
  manifest["rng_seed"] = ckpt.config.seed;
  std::ofstream js(dir / "checkpoint.json", std::ios::trunc);
  js << manifest.dump(2) << '\n';
  if (!js) throw Error("failed writing '" + (dir / "checkpoint.json").string() + "'");
}

GanCheckpoint load_checkpoint(const fs::path& dir) {
  std::ifstream js(dir / "checkpoint.json");
  if (!js) throw Error("missing checkpoint manifest '" + (dir / "checkpoint.json").string() + "'");
  nlohmann::json manifest;
  js >> manifest;
  GanCheckpoint ckpt;
  ckpt.config = gan_config_from_json(manifest.at("config"));
  ckpt.epoch = manifest.at("epoch").get<int>();
  ckpt.generator_steps = manifest.value("generator_steps", std::int64_t{0});
  ckpt.critic_steps = manifest.value("critic_steps", std::int64_t{0});
  for (const auto& r : manifest.at("fid_history")) {
    ckpt.fid_history.push_back({r.at("epoch").get<int>(), r.at("fid").get<double>(),
                                r.value("n_real", std::int64_t{0}), r.value("n_fake", std::int64_t{0})});
  }
  ckpt.generator_state = read_bytes(dir / "generator.pt");
  ckpt.critic_state = read_bytes(dir / "critic.pt");
  ckpt.generator_optim_state = read_bytes(dir / "generator_optim.pt");
  ckpt.critic_optim_state = read_bytes(dir / "critic_optim.pt");
  ckpt.torch_rng_state = read_bytes(dir / "rng_torch.bin");
  ckpt.data_rng_state = read_bytes(dir / "rng_data.txt");
  return ckpt;
}

namespace {

template <typename Module>
void load_state(Module& module, const std::string& bytes) {
  if (bytes.empty()) throw Error("checkpoint has no network state");
  std::istringstream in(bytes);
  torch::serialize::InputArchive archive;
  archive.load_from(in);
  module->load(archive);
}

}  // namespace

Generator restore_generator(const GanCheckpoint& ckpt) {
  Generator g(ckpt.config);
  load_state(g, ckpt.generator_state);
  g->eval();
  return g;
}

Critic restore_critic(const GanCheckpoint& ckpt) {
  Critic c(ckpt.config);
  load_state(c, ckpt.critic_state);
  c->eval();
  return c;
}

}  // namespace clinaug
