#pragma once

#include <string>
#include <vector>

namespace bfw {

enum class AffinityPolicy : int { kNone = 0, kScatter = 1, kCompact = 2 };

const char* to_string(AffinityPolicy p);
AffinityPolicy parse_affinity_policy(const std::string& s);

// CPUs visible to the scheduler (hardware threads).
int logical_cpu_count();

// Distinct (package, core) pairs from /proc/cpuinfo; falls back to the
// logical count when the topology can't be read.
int physical_core_count();

// Pure mapping from worker index to CPU id, one entry per worker:
//  - kScatter: worker w -> (w * physical_cores / threads) % physical_cores,
//    spreading workers across cores before doubling up on SMT siblings.
//  - kCompact: worker w -> w % logical_cpus, packing adjacent workers.
//  - kNone: empty vector, no pinning.
std::vector<int> affinity_cpu_list(AffinityPolicy policy, int threads, int physical_cores,
                                   int logical_cpus);

// Pins the calling thread; returns false if the OS refused (caller should
// warn once and carry on unpinned).
bool pin_current_thread(int cpu);

}  // namespace bfw
