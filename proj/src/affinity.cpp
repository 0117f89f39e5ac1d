#include "bfw/affinity.hpp"

#include <pthread.h>
#include <sched.h>

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "bfw/errors.hpp"

namespace bfw {

const char* to_string(AffinityPolicy p) {
  switch (p) {
    case AffinityPolicy::kNone: return "none";
    case AffinityPolicy::kScatter: return "scatter";
    case AffinityPolicy::kCompact: return "compact";
  }
  return "?";
}

AffinityPolicy parse_affinity_policy(const std::string& s) {
  if (s == "none") return AffinityPolicy::kNone;
  if (s == "scatter") return AffinityPolicy::kScatter;
  if (s == "compact") return AffinityPolicy::kCompact;
  throw ValidationError("affinity: unknown policy '" + s + "'");
}

int logical_cpu_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

int physical_core_count() {
  std::ifstream info("/proc/cpuinfo");
  if (!info) return logical_cpu_count();
  std::set<std::pair<int, int>> cores;
  int package = -1, core = -1;
  std::string line;
  auto value_after_colon = [](const std::string& l) {
    const auto pos = l.find(':');
    return pos == std::string::npos ? -1 : std::stoi(l.substr(pos + 1));
  };
  while (std::getline(info, line)) {
    if (line.rfind("physical id", 0) == 0) package = value_after_colon(line);
    else if (line.rfind("core id", 0) == 0) core = value_after_colon(line);
    else if (line.empty() && package >= 0 && core >= 0) {
      cores.emplace(package, core);
      package = core = -1;
    }
  }
  if (package >= 0 && core >= 0) cores.emplace(package, core);
  return cores.empty() ? logical_cpu_count() : static_cast<int>(cores.size());
}

std::vector<int> affinity_cpu_list(AffinityPolicy policy, int threads, int physical_cores,
                                   int logical_cpus) {
  if (threads < 1) throw ValidationError("threads: must be >= 1");
  if (physical_cores < 1 || logical_cpus < 1)
    throw ValidationError("core counts must be >= 1");
  std::vector<int> cpus;
  if (policy == AffinityPolicy::kNone) return cpus;
  cpus.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    if (policy == AffinityPolicy::kScatter)
      cpus.push_back(static_cast<int>(static_cast<long>(w) * physical_cores / threads) %
                     physical_cores);
    else
      cpus.push_back(w % logical_cpus);
  }
  return cpus;
}

bool pin_current_thread(int cpu) {
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
}

}  // namespace bfw
