// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/error.hpp"

#include <cstdio>
#include <mutex>

namespace lmgdpt {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink = nullptr;
void* g_sink_data = nullptr;

}  // namespace

void log_warning(const std::string& message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  if (g_sink != nullptr) {
    g_sink(message.c_str(), g_sink_data);
  } else {
    std::fprintf(stderr, "warning: %s\n", message.c_str());
  }
}

void set_warning_sink(WarningSink sink, void* user_data) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  g_sink = sink;
  g_sink_data = user_data;
}

}  // namespace lmgdpt
