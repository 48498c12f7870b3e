#include "qfree/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qfree {

namespace {

int initial_workers() {
    if (const char* env = std::getenv("QFREE_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& workers() {
    static std::atomic<int> n{initial_workers()};
    return n;
}

}  // namespace

int worker_count() { return workers().load(); }

void set_worker_count(int n) { workers() = n < 1 ? 1 : n; }

}  // namespace qfree
