// Execution lanes: OpenMP-parallel loops with a serial reference path.
#pragma once

#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

namespace tesim {

enum class ExecMode { serial, parallel };

inline ExecMode exec_mode_from_string(const std::string& s) {
    if (s == "serial") return ExecMode::serial;
    if (s == "parallel" || s == "openmp") return ExecMode::parallel;
    throw std::invalid_argument("unknown exec mode: " + s);
}

// Runs fn(i) for i in [0, n). The parallel lane distributes iterations over
// OpenMP threads; results must be written to per-index slots so that both
// lanes produce identical output. Exceptions are captured per index and the
// lowest-index one is rethrown after the loop.
template <typename F>
void parallel_for(int n, ExecMode mode, F&& fn) {
    if (n <= 0) return;
    if (mode == ExecMode::serial) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i)
        if (errors[static_cast<size_t>(i)]) std::rethrow_exception(errors[static_cast<size_t>(i)]);
}

}  // namespace tesim
