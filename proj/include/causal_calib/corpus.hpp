/*
 * Copyright 2026 The causal-calib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace causal_calib {

struct LabeledText {
  std::string label;
  std::string text;
};

/// One `{"label": ..., "text": ...}` object per line; blank lines skipped.
std::vector<LabeledText> read_corpus_jsonl(const std::filesystem::path& path);
std::vector<LabeledText> parse_corpus_jsonl(std::istream& in, std::string_view source);
void write_corpus_jsonl(std::ostream& out, const std::vector<LabeledText>& corpus);

}  // namespace causal_calib
