#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mugi/nonlinear.hpp"

namespace mugi {

// Transformer model description (decoder-only, Llama-style MLP with
// gate/up/down projections and SiLU).
struct ModelSpec {
  std::string name;
  int layers = 0;
  int attn_heads = 0;
  int kv_heads = 0;
  int hidden_dim = 0;
  int ffn_dim = 0;
  int seq_len = 0;

  int head_dim() const { return hidden_dim / attn_heads; }
  int gqa_group() const { return attn_heads / kv_heads; }

  void validate() const {
    if (layers < 1 || attn_heads < 1 || kv_heads < 1 || hidden_dim < 1 || ffn_dim < 1 ||
        seq_len < 1)
      throw std::invalid_argument("model " + name + ": all dimensions must be positive");
    if (attn_heads % kv_heads != 0)
      throw std::invalid_argument("model " + name + ": attn heads must be divisible by kv heads");
    if (hidden_dim % attn_heads != 0)
      throw std::invalid_argument("model " + name + ": hidden dim must be divisible by heads");
  }
};

inline ModelSpec llama2_7b() { return {"llama2-7b", 32, 32, 32, 4096, 11008, 4096}; }
inline ModelSpec llama2_13b() { return {"llama2-13b", 40, 40, 40, 5120, 13824, 4096}; }
inline ModelSpec llama2_70b() { return {"llama2-70b", 80, 64, 8, 8192, 28672, 4096}; }
// MHA twin of 70B for attention/KV sensitivity studies.
inline ModelSpec llama2_70b_mha() { return {"llama2-70b-mha", 80, 64, 64, 8192, 28672, 4096}; }

inline ModelSpec model_by_name(const std::string& name) {
  if (name == "llama2-7b") return llama2_7b();
  if (name == "llama2-13b") return llama2_13b();
  if (name == "llama2-70b") return llama2_70b();
  if (name == "llama2-70b-mha") return llama2_70b_mha();
  throw std::invalid_argument("unknown model: " + name);
}

enum class Phase { Prefill, Decode };

struct QuantSpec {
  bool weights_int4 = true;
  bool kv_int4 = true;
  int group_size = 128;
};

struct RunSpec {
  std::string id;
  ModelSpec model;
  int batch = 1;
  Phase phase = Phase::Decode;
  int seq_len = 4096;  // prefill length, or decode position (KV length)
  QuantSpec quant;

  void validate() const {
    model.validate();
    if (batch < 1 || batch > 32) throw std::invalid_argument("run " + id + ": batch must be in [1, 32]");
    if (seq_len < 1) throw std::invalid_argument("run " + id + ": seq len must be positive");
    if (quant.group_size < 1) throw std::invalid_argument("run " + id + ": group size must be positive");
  }
};

enum class OpKind { ProjGemm, AttnQkGemm, AttnPvGemm, FfnGemm, Softmax, Silu, Gelu };

inline bool is_gemm(OpKind k) {
  return k == OpKind::ProjGemm || k == OpKind::AttnQkGemm || k == OpKind::AttnPvGemm ||
         k == OpKind::FfnGemm;
}

inline const char* name_of(OpKind k) {
  switch (k) {
    case OpKind::ProjGemm: return "proj";
    case OpKind::AttnQkGemm: return "attn_qk";
    case OpKind::AttnPvGemm: return "attn_pv";
    case OpKind::FfnGemm: return "ffn";
    case OpKind::Softmax: return "softmax";
    case OpKind::Silu: return "silu";
    case OpKind::Gelu: return "gelu";
  }
  return "?";
}

// One operation shape plus its repetition count across the model. GEMMs are
// M (stationary rows, INT4 side) x N (BF16 columns) x K (reduction);
// nonlinear ops carry an element count.
struct Op {
  std::string name;
  OpKind kind = OpKind::ProjGemm;
  int64_t m = 0, n = 0, k = 0;
  int64_t elements = 0;
  int64_t repeat = 1;
  bool weights_quantized = false;  // INT4 stationary operand (WOQ or KVQ)
  int quant_group = 0;

  int64_t macs() const { return is_gemm(kind) ? m * n * k * repeat : 0; }
};

struct OpGraph {
  std::string run_id;
  Phase phase = Phase::Decode;
  int batch = 1;
  std::vector<Op> ops;

  int64_t total_macs() const {
    int64_t t = 0;
    for (const auto& op : ops) t += op.macs();
    return t;
  }
};

// Expands a run into per-layer GEMM and nonlinear ops with exact shapes.
//
// Attention GEMMs are per (kv head, batch element): each KV head's cache is
// its own stationary operand, so the BF16 column count equals the GQA group
// width. Batch therefore multiplies the attention op count, not N. RoPE,
// layer norm, residual adds, and the SwiGLU elementwise product are charged
// zero compute and flagged as unmodeled in reports.
inline OpGraph build_graph(const RunSpec& run) {
  run.validate();
  const ModelSpec& m = run.model;
  const bool decode = run.phase == Phase::Decode;
  const int64_t layers = m.layers;
  const int64_t kv_len = run.seq_len;
  const int64_t q_tokens = decode ? 1 : run.seq_len;  // per batch element
  const int64_t proj_n = static_cast<int64_t>(run.batch) * q_tokens;
  const int64_t group = m.gqa_group();
  const int group_size = run.quant.group_size;

  OpGraph g;
  g.run_id = run.id;
  g.phase = run.phase;
  g.batch = run.batch;

  auto gemm_op = [&](const std::string& name, OpKind kind, int64_t M, int64_t N, int64_t K,
                     int64_t repeat, bool quantized) {
    Op op;
    op.name = name;
    op.kind = kind;
    op.m = M;
    op.n = N;
    op.k = K;
    op.repeat = repeat;
    op.weights_quantized = quantized;
    op.quant_group = quantized ? group_size : 0;
    g.ops.push_back(op);
  };
  auto nonlinear_op = [&](const std::string& name, OpKind kind, int64_t elements, int64_t repeat) {
    Op op;
    op.name = name;
    op.kind = kind;
    op.elements = elements;
    op.repeat = repeat;
    g.ops.push_back(op);
  };

  const int64_t kv_dim = static_cast<int64_t>(m.kv_heads) * m.head_dim();
  gemm_op("q_proj", OpKind::ProjGemm, m.hidden_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);
  gemm_op("k_proj", OpKind::ProjGemm, kv_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);
  gemm_op("v_proj", OpKind::ProjGemm, kv_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);

  const int64_t attn_count = layers * m.kv_heads * run.batch;
  const int64_t attn_n = group * q_tokens;
  gemm_op("attn_qk", OpKind::AttnQkGemm, kv_len, attn_n, m.head_dim(), attn_count,
          run.quant.kv_int4);
  nonlinear_op("softmax", OpKind::Softmax,
               static_cast<int64_t>(m.attn_heads) * run.batch * q_tokens * kv_len, layers);
  gemm_op("attn_pv", OpKind::AttnPvGemm, m.head_dim(), attn_n, kv_len, attn_count,
          run.quant.kv_int4);

  gemm_op("o_proj", OpKind::ProjGemm, m.hidden_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);

  gemm_op("ffn_gate", OpKind::FfnGemm, m.ffn_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);
  gemm_op("ffn_up", OpKind::FfnGemm, m.ffn_dim, proj_n, m.hidden_dim, layers,
          run.quant.weights_int4);
  nonlinear_op("silu", OpKind::Silu, static_cast<int64_t>(m.ffn_dim) * proj_n, layers);
  gemm_op("ffn_down", OpKind::FfnGemm, m.hidden_dim, proj_n, m.ffn_dim, layers,
          run.quant.weights_int4);
  return g;
}

// Decode throughput at a fixed sequence position.
inline double tokens_per_second(const OpGraph& g, double total_cycles, double frequency_hz) {
  if (g.phase != Phase::Decode) throw std::invalid_argument("throughput is decode-only");
  if (total_cycles <= 0.0) throw std::invalid_argument("zero cycles");
  return g.batch * frequency_hz / total_cycles;
}

}  // namespace mugi
