// Prints the per-op timing of one Llama decode step on a Mugi node next to
// a 16x16 systolic baseline.

#include <cstdio>

#include "mugi/schedule.hpp"

using namespace mugi;

int main() {
  RunSpec run;
  run.id = "llama2-70b-gqa-b8";
  run.model = llama2_70b();
  run.batch = 8;
  run.phase = Phase::Decode;
  run.seq_len = 4096;
  const OpGraph graph = build_graph(run);

  ArrayConfig mugi256;
  mugi256.height = 256;
  BaselineConfig sa16;
  sa16.kind = BaselineKind::Systolic;
  sa16.height = 16;
  sa16.vector_unit.lanes = 16;

  const NocConfig noc;
  const ScheduleResult a = schedule({"mugi256", mugi256}, noc, graph);
  const ScheduleResult b = schedule({"sa16", sa16}, noc, graph);

  std::printf("%-10s %8s %16s %16s\n", "op", "repeat", "mugi256 cycles", "sa16 cycles");
  for (size_t i = 0; i < a.ops.size(); ++i)
    std::printf("%-10s %8lld %16lld %16lld\n", a.ops[i].op.name.c_str(),
                static_cast<long long>(a.ops[i].op.repeat),
                static_cast<long long>(a.ops[i].total_cycles),
                static_cast<long long>(b.ops[i].total_cycles));
  std::printf("%-10s %8s %16lld %16lld\n", "total", "", static_cast<long long>(a.total_cycles),
              static_cast<long long>(b.total_cycles));
  std::printf("tokens/s: mugi256 %.3f, sa16 %.3f\n",
              tokens_per_second(graph, static_cast<double>(a.total_cycles), a.frequency_hz),
              tokens_per_second(graph, static_cast<double>(b.total_cycles), b.frequency_hz));
  return 0;
}
