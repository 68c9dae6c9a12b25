// Copyright 2026 The segloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <sstream>

#include "segloop/eval.h"

namespace segloop {
namespace {

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string Optional(const std::optional<double>& v, const char* absent) { return v ? Fixed(*v) : absent; }

}  // namespace

std::string MetricsTable(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "label";
  for (int c = 0; c < kNumClasses; ++c) out << '\t' << ClassName(static_cast<ClassId>(c));
  out << "\tmIoU\tboundary_iou\n";
  for (const auto& r : rows) {
    out << r.label;
    for (const auto& v : r.iou.per_class) out << '\t' << Optional(v, "-");
    out << '\t' << Fixed(r.iou.mean) << '\t' << Optional(r.boundary_iou, "-") << '\n';
  }
  return out.str();
}

std::string MetricsCsv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "label";
  for (int c = 0; c < kNumClasses; ++c) out << ",iou_" << ClassName(static_cast<ClassId>(c));
  out << ",miou,boundary_iou\n";
  for (const auto& r : rows) {
    out << r.label;
    for (const auto& v : r.iou.per_class) out << ',' << Optional(v, "");
    out << ',' << Fixed(r.iou.mean) << ',' << Optional(r.boundary_iou, "") << '\n';
  }
  return out.str();
}

}  // namespace segloop
