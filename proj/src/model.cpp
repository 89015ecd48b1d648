/* Copyright 2026 The APE Authors. All Rights Reserved.

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

#include "ape/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ape/kernels.hpp"

namespace ape {

std::string to_string(Preset p) { return p == Preset::kTiny ? "tiny" : "edsr"; }

Preset parse_preset(const std::string& s) {
  if (s == "tiny") return Preset::kTiny;
  if (s == "edsr") return Preset::kEdsr;
  throw ConfigError("unknown preset '" + s + "' (expected tiny or edsr)");
}

std::string to_string(ExitSignal s) {
  return s == ExitSignal::kIncrementalCapacity ? "ic" : "ap";
}

ExitSignal parse_exit_signal(const std::string& s) {
  if (s == "ic") return ExitSignal::kIncrementalCapacity;
  if (s == "ap") return ExitSignal::kAbsolutePerformance;
  throw ConfigError("unknown signal '" + s + "' (expected ic or ap)");
}

BackboneConfig BackboneConfig::tiny(int scale) {
  return BackboneConfig{Preset::kTiny, scale, 16, 8, 2, 1.0};
}

BackboneConfig BackboneConfig::edsr(int scale) {
  return BackboneConfig{Preset::kEdsr, scale, 256, 32, 4, 0.1};
}

void BackboneConfig::validate() const {
  if (scale != 2 && scale != 3 && scale != 4) {
    throw ConfigError("scale must be 2, 3 or 4, got " + std::to_string(scale));
  }
  if (channels <= 0) throw ConfigError("channels must be positive");
  if (num_blocks <= 0) throw ConfigError("num_blocks must be positive");
  if (num_blocks > 999) throw ConfigError("num_blocks must be at most 999");
  if (exit_interval <= 0) throw ConfigError("exit_interval must be positive");
  if (num_blocks % exit_interval != 0) {
    throw ConfigError("exit_interval " + std::to_string(exit_interval) +
                      " does not divide num_blocks " + std::to_string(num_blocks));
  }
  // 0 is accepted: it turns every block into the identity.
  if (!(residual_scaling >= 0.0 && residual_scaling <= 1.0)) {
    throw ConfigError("residual_scaling must lie in [0, 1]");
  }
}

bool BackboneConfig::same_architecture(const BackboneConfig& o) const {
  return scale == o.scale && channels == o.channels && num_blocks == o.num_blocks &&
         residual_scaling == o.residual_scaling;
}

namespace {

constexpr std::size_t kKernel = 3;
constexpr std::size_t kPad = 1;

std::string block_prefix(int i, const char* conv) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "body.%03d.%s", i, conv);
  return buf;
}

ConvLayer make_conv(const std::string& prefix, std::size_t cin, std::size_t cout,
                    std::mt19937_64& rng) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(cin * kKernel * kKernel));
  std::uniform_real_distribution<float> dist(-bound, bound);
  Tensor<float> w({cout, cin, kKernel, kKernel});
  for (auto& v : w.data()) v = dist(rng);
  Tensor<float> b({cout});
  for (auto& v : b.data()) v = dist(rng);
  return ConvLayer{Parameter<float>(prefix + ".weight", std::move(w)),
                   Parameter<float>(prefix + ".bias", std::move(b))};
}

}  // namespace

MultiExitSR MultiExitSR::build(const BackboneConfig& config, std::uint64_t seed) {
  config.validate();
  MultiExitSR m;
  m.config_ = config;
  std::mt19937_64 rng(seed);
  const auto C = static_cast<std::size_t>(config.channels);
  m.head_ = make_conv("head", 3, C, rng);
  for (int i = 0; i < config.num_blocks; ++i) {
    ResBlock blk;
    blk.conv1 = make_conv(block_prefix(i, "conv1"), C, C, rng);
    blk.conv2 = make_conv(block_prefix(i, "conv2"), C, C, rng);
    m.body_.push_back(std::move(blk));
  }
  std::vector<int> factors;
  if (config.scale == 3) {
    factors = {3};
  } else {
    for (int s = config.scale; s > 1; s /= 2) factors.push_back(2);
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto r = static_cast<std::size_t>(factors[i]);
    m.upsample_.push_back(make_conv("tail.up." + std::to_string(i), C, C * r * r, rng));
    m.upsample_factor_.push_back(factors[i]);
  }
  m.tail_out_ = make_conv("tail.out", C, 3, rng);
  m.reg_weight_ = Parameter<float>("regressor.weight", Tensor<float>({1, C}));
  m.reg_bias_ = Parameter<float>("regressor.bias", Tensor<float>({1}));
  return m;
}

MultiExitSR MultiExitSR::clone() const {
  MultiExitSR copy = build(config_, 0);
  copy.meta_ = meta_;
  auto src = parameters();
  auto dst = copy.parameters();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i]->var.mutable_value() = src[i]->value();
    dst[i]->adam_m = src[i]->adam_m;
    dst[i]->adam_v = src[i]->adam_v;
    dst[i]->step_count = src[i]->step_count;
  }
  return copy;
}

std::vector<int> MultiExitSR::exit_layers() const {
  std::vector<int> out;
  for (int j = 1; j <= num_exits(); ++j) out.push_back(config_.blocks_at_exit(j));
  return out;
}

std::vector<const Parameter<float>*> MultiExitSR::parameters() const {
  std::vector<const Parameter<float>*> out;
  auto add_conv = [&](const ConvLayer& c) {
    out.push_back(&c.weight);
    out.push_back(&c.bias);
  };
  add_conv(head_);
  for (const auto& b : body_) {
    add_conv(b.conv1);
    add_conv(b.conv2);
  }
  for (const auto& u : upsample_) add_conv(u);
  add_conv(tail_out_);
  out.push_back(&reg_weight_);
  out.push_back(&reg_bias_);
  std::sort(out.begin(), out.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });
  return out;
}

std::vector<Parameter<float>*> MultiExitSR::parameters() {
  std::vector<Parameter<float>*> out;
  for (const auto* p : std::as_const(*this).parameters()) out.push_back(const_cast<Parameter<float>*>(p));
  return out;
}

std::vector<Parameter<float>*> MultiExitSR::regressor_parameters() {
  return {&reg_bias_, &reg_weight_};
}

std::vector<Parameter<float>*> MultiExitSR::sr_parameters() {
  std::vector<Parameter<float>*> out;
  for (auto* p : parameters())
    if (p != &reg_weight_ && p != &reg_bias_) out.push_back(p);
  return out;
}

Parameter<float>* MultiExitSR::find(const std::string& name) {
  for (auto* p : parameters())
    if (p->name == name) return p;
  return nullptr;
}

std::size_t MultiExitSR::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->numel();
  return n;
}

Var<float> MultiExitSR::conv_graph(const ConvLayer& layer, const Var<float>& x) {
  return conv2d(x, layer.weight.var, layer.bias.var, kPad);
}

Tensor<float> MultiExitSR::conv_values(const ConvLayer& layer, const Tensor<float>& x) {
  return kernels::conv2d_forward(x, layer.weight.value(), layer.bias.value(), kPad);
}

Var<float> MultiExitSR::head(const Var<float>& x) const {
  if (x.value().rank() != 4 || x.value().dim(1) != 3) {
    throw ShapeError("model input must be (B,3,h,w), got " + shape_string(x.shape()));
  }
  return conv_graph(head_, x);
}

Var<float> MultiExitSR::body(const Var<float>& f, int first_block, int count) const {
  Var<float> h = f;
  const auto rs = static_cast<float>(config_.residual_scaling);
  for (int i = first_block; i < first_block + count; ++i) {
    const ResBlock& b = body_.at(static_cast<std::size_t>(i));
    Var<float> r = conv_graph(b.conv2, relu(conv_graph(b.conv1, h)));
    h = add(h, scale(r, rs));
  }
  return h;
}

Var<float> MultiExitSR::tail(const Var<float>& f) const {
  Var<float> h = f;
  for (std::size_t i = 0; i < upsample_.size(); ++i) {
    h = pixel_shuffle(conv_graph(upsample_[i], h), static_cast<std::size_t>(upsample_factor_[i]));
  }
  return conv_graph(tail_out_, h);
}

Var<float> MultiExitSR::regress(const Var<float>& f) const {
  return tanh_op(linear(global_avg_pool(f), reg_weight_.var, reg_bias_.var));
}

AllExitOutputs MultiExitSR::forward_all_exits(const Var<float>& x) const {
  AllExitOutputs out;
  out.f0 = head(x);
  Var<float> f = out.f0;
  for (int j = 1; j <= num_exits(); ++j) {
    f = body(f, config_.blocks_at_exit(j - 1), config_.exit_interval);
    out.features.push_back(f);
    out.outputs.push_back(tail(f));
    out.predictions.push_back(regress(f));
  }
  return out;
}

Tensor<float> MultiExitSR::block_values(const Tensor<float>& f, int index) const {
  const ResBlock& b = body_.at(static_cast<std::size_t>(index));
  Tensor<float> r = conv_values(b.conv2, relu_values(conv_values(b.conv1, f)));
  return add_values(f, scale_values(r, static_cast<float>(config_.residual_scaling)));
}

ExitState MultiExitSR::begin(const Tensor<float>& x) const {
  if (x.rank() != 4 || x.dim(1) != 3) {
    throw ShapeError("model input must be (B,3,h,w), got " + shape_string(x.shape()));
  }
  return ExitState{conv_values(head_, x), 0};
}

StepResult MultiExitSR::forward_step(const ExitState& state) const {
  if (state.exit_index < 0 || state.exit_index >= num_exits()) {
    throw StateError("forward_step: cannot step past exit " + std::to_string(num_exits()));
  }
  Tensor<float> f = state.feature;
  const int first = config_.blocks_at_exit(state.exit_index);
  for (int i = first; i < first + config_.exit_interval; ++i) f = block_values(f, i);
  StepResult r;
  r.prediction = regress(f);
  r.state = ExitState{std::move(f), state.exit_index + 1};
  return r;
}

Tensor<float> MultiExitSR::tail(const Tensor<float>& f) const {
  Tensor<float> h = f;
  for (std::size_t i = 0; i < upsample_.size(); ++i) {
    h = kernels::pixel_shuffle(conv_values(upsample_[i], h),
                               static_cast<std::size_t>(upsample_factor_[i]));
  }
  return conv_values(tail_out_, h);
}

Tensor<float> MultiExitSR::regress(const Tensor<float>& f) const {
  return tanh_values(linear_values(kernels::global_avg_pool(f), reg_weight_.value(), reg_bias_.value()));
}

Tensor<float> MultiExitSR::forward_full(const Tensor<float>& x) const {
  ExitState s = begin(x);
  while (s.exit_index < num_exits()) s = forward_step(s).state;
  return tail(s.feature);
}

bool MultiExitSR::finite() const {
  for (const auto* p : parameters())
    for (float v : p->value().data())
      if (!std::isfinite(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr const char* kMagic = "ape-checkpoint";
constexpr int kFormatVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::ostream& os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_uint(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) throw FormatError("checkpoint truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Record {
  Shape shape;
  std::vector<float> data;
};

CheckpointHeader parse_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic) throw FormatError("not an ape checkpoint");
  std::map<std::string, std::string> kv;
  bool ended = false;
  while (std::getline(is, line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("bad checkpoint header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!ended) throw FormatError("checkpoint header not terminated");
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(std::string("checkpoint header missing ") + key);
    return it->second;
  };
  CheckpointHeader h;
  try {
    h.format_version = std::stoi(need("format_version"));
    if (h.format_version != kFormatVersion) {
      throw FormatError("unsupported checkpoint format_version " + std::to_string(h.format_version));
    }
    h.config.preset = parse_preset(need("preset"));
    h.config.scale = std::stoi(need("scale"));
    h.config.channels = std::stoi(need("channels"));
    h.config.num_blocks = std::stoi(need("num_blocks"));
    h.config.exit_interval = std::stoi(need("exit_interval"));
    h.config.residual_scaling = std::stod(need("residual_scaling"));
    h.meta.stage = need("stage");
    h.meta.signal = parse_exit_signal(need("signal"));
  } catch (const std::logic_error&) {
    throw FormatError("malformed number in checkpoint header");
  }
  h.config.validate();
  return h;
}

std::map<std::string, Record> read_records(std::istream& is) {
  std::map<std::string, Record> out;
  const std::uint64_t n = get_uint(is, 4);
  for (std::uint64_t r = 0; r < n; ++r) {
    const auto len = static_cast<std::size_t>(get_uint(is, 4));
    if (len > 4096) throw FormatError("checkpoint record name too long");
    std::string name(len, '\0');
    if (!is.read(name.data(), static_cast<std::streamsize>(len))) throw FormatError("checkpoint truncated");
    Record rec;
    const auto rank = get_uint(is, 4);
    if (rank > 8) throw FormatError("checkpoint record rank too large");
    for (std::uint64_t i = 0; i < rank; ++i) rec.shape.push_back(static_cast<std::size_t>(get_uint(is, 4)));
    const auto count = get_uint(is, 8);
    if (count != shape_numel(rec.shape)) throw FormatError("checkpoint record '" + name + "' size mismatch");
    rec.data.resize(count);
    for (auto& v : rec.data) v = std::bit_cast<float>(static_cast<std::uint32_t>(get_uint(is, 4)));
    out.emplace(std::move(name), std::move(rec));
  }
  if (is.peek() != EOF) throw FormatError("trailing bytes after checkpoint records");
  return out;
}

std::size_t assign_records(MultiExitSR& model, const std::map<std::string, Record>& records) {
  auto params = model.parameters();
  if (records.size() != params.size()) {
    throw ConfigError("checkpoint has " + std::to_string(records.size()) +
                      " parameters, model expects " + std::to_string(params.size()));
  }
  for (auto* p : params) {
    auto it = records.find(p->name);
    if (it == records.end()) throw ConfigError("checkpoint lacks parameter " + p->name);
    if (it->second.shape != p->value().shape()) {
      throw ConfigError("checkpoint parameter " + p->name + " has shape " +
                        shape_string(it->second.shape) + ", model expects " +
                        shape_string(p->value().shape()));
    }
    p->var.mutable_value() = Tensor<float>(it->second.shape, it->second.data);
  }
  return params.size();
}

std::ifstream open_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path.string());
  return is;
}

}  // namespace

void save_checkpoint(const MultiExitSR& model, const std::filesystem::path& path) {
  std::ostringstream os(std::ios::binary);
  const BackboneConfig& c = model.config();
  os << kMagic << "\n"
     << "format_version=" << kFormatVersion << "\n"
     << "preset=" << to_string(c.preset) << "\n"
     << "scale=" << c.scale << "\n"
     << "channels=" << c.channels << "\n"
     << "num_blocks=" << c.num_blocks << "\n"
     << "exit_interval=" << c.exit_interval << "\n"
     << "residual_scaling=" << format_real(c.residual_scaling) << "\n"
     << "stage=" << model.meta().stage << "\n"
     << "signal=" << to_string(model.meta().signal) << "\n"
     << "end\n";
  const auto params = model.parameters();
  put_u32(os, static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    put_u32(os, static_cast<std::uint32_t>(p->name.size()));
    os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put_u32(os, static_cast<std::uint32_t>(p->value().rank()));
    for (std::size_t e : p->value().shape()) put_u32(os, static_cast<std::uint32_t>(e));
    put_u64(os, p->numel());
    for (float v : p->value().data()) put_u32(os, std::bit_cast<std::uint32_t>(v));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write checkpoint " + path.string());
  const std::string bytes = os.str();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing checkpoint " + path.string());
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  auto is = open_checkpoint(path);
  return parse_header(is);
}

MultiExitSR load_checkpoint(const std::filesystem::path& path) {
  auto is = open_checkpoint(path);
  const CheckpointHeader h = parse_header(is);
  MultiExitSR model = MultiExitSR::build(h.config, 0);
  model.meta() = h.meta;
  try {
    assign_records(model, read_records(is));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint inconsistent with its header: ") + e.what());
  }
  return model;
}

std::size_t load_weights_into(MultiExitSR& model, const std::filesystem::path& path) {
  auto is = open_checkpoint(path);
  const CheckpointHeader h = parse_header(is);
  if (!model.config().same_architecture(h.config)) {
    throw ConfigError("checkpoint architecture (scale=" + std::to_string(h.config.scale) +
                      ", channels=" + std::to_string(h.config.channels) +
                      ", num_blocks=" + std::to_string(h.config.num_blocks) +
                      ") does not match the model");
  }
  return assign_records(model, read_records(is));
}

}  // namespace ape
