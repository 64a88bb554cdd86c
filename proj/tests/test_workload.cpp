#include <catch2/catch_amalgamated.hpp>

#include "mugi/workload.hpp"

using namespace mugi;

namespace {

RunSpec decode_run(ModelSpec m, int batch, int seq = 4096) {
  RunSpec r;
  r.id = m.name + "-b" + std::to_string(batch);
  r.model = std::move(m);
  r.batch = batch;
  r.phase = Phase::Decode;
  r.seq_len = seq;
  return r;
}

const Op& find_op(const OpGraph& g, const std::string& name) {
  for (const auto& op : g.ops)
    if (op.name == name) return op;
  throw std::runtime_error("missing op " + name);
}

}  // namespace

TEST_CASE("llama decode projection shapes") {
  const OpGraph g = build_graph(decode_run(llama2_7b(), 8));
  const Op& q = find_op(g, "q_proj");
  CHECK(q.m == 4096);
  CHECK(q.n == 8);
  CHECK(q.k == 4096);
  CHECK(q.repeat == 32);
  CHECK(q.weights_quantized);
}

TEST_CASE("gqa sets the attention column width") {
  const OpGraph g70 = build_graph(decode_run(llama2_70b(), 8));
  const Op& qk = find_op(g70, "attn_qk");
  CHECK(qk.n == 8);  // one KV head serves 8 queries
  CHECK(qk.m == 4096);
  CHECK(qk.k == 128);
  CHECK(qk.repeat == 80 * 8 * 8);  // layers x kv heads x batch

  const OpGraph mha = build_graph(decode_run(llama2_7b(), 1));
  CHECK(find_op(mha, "attn_qk").n == 1);  // degenerate batch GEMV
}

TEST_CASE("total projection and ffn macs match the parameter count") {
  for (const ModelSpec& m : {llama2_7b(), llama2_13b(), llama2_70b()}) {
    const int batch = 8;
    const OpGraph g = build_graph(decode_run(m, batch));
    int64_t weight_macs = 0;
    for (const auto& op : g.ops)
      if (op.kind == OpKind::ProjGemm || op.kind == OpKind::FfnGemm) weight_macs += op.macs();
    const int64_t kv_dim = static_cast<int64_t>(m.kv_heads) * m.head_dim();
    const int64_t params_per_layer = 2LL * m.hidden_dim * m.hidden_dim +
                                     2LL * m.hidden_dim * kv_dim +
                                     3LL * m.hidden_dim * m.ffn_dim;
    CHECK(weight_macs == batch * m.layers * params_per_layer);
  }
}

TEST_CASE("softmax element counts") {
  const ModelSpec m = llama2_70b();
  const OpGraph g = build_graph(decode_run(m, 8, 2048));
  const Op& sm = find_op(g, "softmax");
  CHECK(sm.elements == static_cast<int64_t>(m.attn_heads) * 8 * 2048);
  CHECK(sm.repeat == m.layers);
}

TEST_CASE("kv-head switch moves only attention width and kv bytes") {
  const OpGraph gqa = build_graph(decode_run(llama2_70b(), 8));
  const OpGraph mha = build_graph(decode_run(llama2_70b_mha(), 8));

  for (const char* name : {"q_proj", "o_proj", "ffn_gate", "ffn_up", "ffn_down", "softmax"}) {
    const Op& a = find_op(gqa, name);
    const Op& b = find_op(mha, name);
    CHECK(a.m == b.m);
    CHECK(a.n == b.n);
    CHECK(a.k == b.k);
    CHECK(a.elements == b.elements);
    CHECK(a.repeat == b.repeat);
  }
  const Op& aq = find_op(gqa, "attn_qk");
  const Op& bq = find_op(mha, "attn_qk");
  CHECK(aq.n == 8);
  CHECK(bq.n == 1);
  CHECK(aq.macs() == bq.macs());  // same total attention work
}

TEST_CASE("prefill widens the activation side") {
  RunSpec r = decode_run(llama2_7b(), 4, 512);
  r.phase = Phase::Prefill;
  const OpGraph g = build_graph(r);
  CHECK(find_op(g, "q_proj").n == 4 * 512);
  CHECK(find_op(g, "attn_qk").n == 512);  // MHA group 1 x seq
  CHECK(find_op(g, "softmax").elements == 32LL * 4 * 512 * 512);
}

TEST_CASE("tokens per second") {
  OpGraph g;
  g.phase = Phase::Decode;
  g.batch = 1;
  CHECK(tokens_per_second(g, 400e6, 400e6) == 1.0);
  g.batch = 8;
  CHECK(tokens_per_second(g, 400e6, 400e6) == 8.0);
  CHECK_THROWS_AS(tokens_per_second(g, 0.0, 400e6), std::invalid_argument);
  g.phase = Phase::Prefill;
  CHECK_THROWS_AS(tokens_per_second(g, 1.0, 400e6), std::invalid_argument);
}

TEST_CASE("run validation") {
  RunSpec bad = decode_run(llama2_7b(), 8);
  bad.batch = 33;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ModelSpec odd = llama2_7b();
  odd.kv_heads = 5;
  CHECK_THROWS_AS(decode_run(odd, 8).validate(), std::invalid_argument);
}
